import csv
import io
import json
import math

import pytest

from main import main


def run(capsys, *argv):
    status = main(["-q", *argv])
    out = capsys.readouterr().out
    return status, out


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_formula_rows(capsys):
    status, out = run(capsys, "formula", "--kappa", "4,3", "--x0", "1", "--y0", "1", "--theta", "pi,pi/2")
    assert status == 0
    rows = rows_of(out)
    by_method = {(r["experiment"], r["kappa"], r["method"], r["theta"]): r for r in rows}
    assert float(by_method[("left_passage", "4.0", "series", "")]["formula"]) == pytest.approx(0.75)
    assert float(by_method[("left_passage", "4.0", "closed_form", "")]["formula"]) == pytest.approx(0.75)
    assert ("left_passage", "3.0", "closed_form", "") not in by_method
    half = by_method[("arc_event", "6.0", "series", repr(math.pi))]
    assert float(half["formula"]) == pytest.approx(0.5)
    quarter = by_method[("arc_event", "6.0", "series", repr(math.pi / 2))]
    assert float(quarter["formula"]) == pytest.approx(0.3837, abs=5e-4)
    assert float(quarter["x0"]) == pytest.approx(-1.0)
    assert all(r["version"] == "1.0" for r in rows)


def test_formula_json_to_file(capsys, tmp_path):
    target = tmp_path / "table.json"
    status, out = run(capsys, "formula", "--theta", "3pi/2", "--format", "json", "--output", str(target))
    assert status == 0
    assert out == ""
    (row,) = json.loads(target.read_text())
    assert row["experiment"] == "arc_event"
    assert row["formula"] == pytest.approx(1.0 - 0.3837, abs=5e-4)


def test_save_writes_into_runs_dir(capsys, isolated_home):
    status, _ = run(capsys, "formula", "--theta", "pi", "--save")
    assert status == 0
    (saved,) = (isolated_home / "runs").glob("sleperc_formula_*.csv")
    assert rows_of(saved.read_text())[0]["experiment"] == "arc_event"


@pytest.mark.parametrize(
    "argv",
    [
        ("formula", "--kappa", "9", "--x0", "1", "--y0", "1"),
        ("formula", "--kappa", "4", "--x0", "1", "--y0", "-1"),
        ("formula", "--kappa", "4", "--x0", "1,2", "--y0", "1,2,3"),
        ("formula", "--theta", "0"),
        ("formula", "--theta", "tau"),
        ("arc", "--theta", "pi", "--delta", "2.5"),
        ("sle", "--kappa", "4", "--x0", "1", "--y0", "1", "--method", "euler"),
    ],
)
def test_domain_errors_exit_2(capsys, argv):
    status, out = run(capsys, *argv)
    assert status == 2
    assert out == ""


def test_truncation_exits_3(capsys):
    status, _ = run(capsys, "sle", "--kappa", "4", "--x0", "1", "--y0", "1", "--n", "200", "--max-steps", "1")
    assert status == 3


def test_verify_symmetry_passes(capsys):
    status, out = run(capsys, "verify", "--suite", "symmetry")
    assert status == 0
    assert "[PASS ] reflection" in out
    assert out.strip().endswith("3/3 checks passed")


def test_injected_fault_is_caught(capsys):
    status, out = run(capsys, "verify", "--suite", "symmetry", "--inject-fault", "odd-symmetry")
    assert status == 1
    assert "[FAIL ] reflection" in out


def test_sle_output_independent_of_workers(capsys, tmp_path):
    outputs = []
    for workers in ("1", "3"):
        target = tmp_path / f"sle_{workers}.csv"
        argv = ["--workers", workers, "sle", "--kappa", "4", "--x0", "1", "--y0", "1",
                "--n", "300", "--step", "0.01", "--seed", "5", "--method", "w_diffusion,loewner",
                "--output", str(target)]
        assert run(capsys, *argv)[0] == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    rows = rows_of(outputs[0].decode())
    assert [r["method"] for r in rows] == ["w_diffusion", "loewner"]
    assert all(r["n"] == "300" and r["seed"] == "5" for r in rows)


def test_arc_output_independent_of_workers(capsys, tmp_path):
    outputs = []
    for workers in ("1", "4"):
        target = tmp_path / f"arc_{workers}.csv"
        argv = ["--workers", workers, "arc", "--theta", "pi/2,pi", "--delta", "0.3", "--margin", "0.3",
                "--n", "120", "--output", str(target)]
        assert run(capsys, *argv)[0] == 0
        outputs.append(target.read_bytes())
    assert outputs[0] == outputs[1]
    rows = rows_of(outputs[0].decode())
    assert [r["method"] for r in rows] == ["indicator", "x_statistic"] * 2


def test_arc_dump(capsys, tmp_path):
    dump = tmp_path / "sample0.txt"
    status, _ = run(capsys, "arc", "--theta", "pi", "--delta", "0.3", "--margin", "0.3",
                    "--n", "100", "--seed", "3", "--dump", str(dump))
    assert status == 0
    header = dump.read_text().splitlines()[0]
    assert header.startswith("# sleperc coloring delta=0.3 margin=0.3 seed=3 index=0")


def test_log_file_records_the_run(capsys, isolated_home):
    run(capsys, "formula", "--theta", "pi")
    log = (isolated_home / "sleperc.log").read_text()
    assert "formula evaluate" in log
    assert "formula finished with exit status 0" in log


def test_formula_small_kappa(capsys):
    status, out = run(capsys, "formula", "--kappa", "0.02,0.01", "--x0", "1", "--y0", "1")
    assert status == 0
    values = [float(r["formula"]) for r in rows_of(out)]
    assert len(values) == 2
    assert all(0.999 < v <= 1.0 for v in values)


def test_formula_accepts_eight_thirds(capsys):
    status, out = run(capsys, "formula", "--kappa", "8/3", "--x0", "3", "--y0", "4")
    assert status == 0
    rows = {r["method"]: r for r in rows_of(out)}
    assert float(rows["closed_form"]["formula"]) == pytest.approx(0.5 + 3 / 10)
    assert float(rows["series"]["formula"]) == pytest.approx(0.8, abs=1e-12)


def test_sle_rows_carry_the_integration_settings(capsys, tmp_path):
    target = tmp_path / "sle.csv"
    status, _ = run(capsys, "sle", "--kappa", "4", "--x0", "1", "--y0", "1", "--n", "200",
                    "--step", "0.01", "--escape", "50", "--max-steps", "200000", "--output", str(target))
    assert status == 0
    (row,) = rows_of(target.read_text())
    assert (row["step"], row["escape"], row["max_steps"], row["escape_correction"]) == (
        "0.01", "50.0", "200000", "true"
    )
    assert row["margin"] == ""


def test_arc_rows_carry_the_margin(capsys, tmp_path):
    target = tmp_path / "arc.json"
    status, _ = run(capsys, "arc", "--theta", "pi", "--delta", "0.3", "--margin", "0.3",
                    "--n", "100", "--format", "json", "--output", str(target))
    assert status == 0
    rows = json.loads(target.read_text())
    assert [r["margin"] for r in rows] == [0.3, 0.3]
    assert all(r["step"] is None for r in rows)
