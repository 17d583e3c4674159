import io
import math
import os

import pytest

from components import ProgressLine, status_row
from constants import ENV_WORKERS
from core.errors import DomainError, RunCancelled
from utils import prefs
from utils.cancellation import CancellationToken
from utils.executor import resolve_workers
from utils.export import format_value, render_csv, render_json
from utils.logger import get_log_path, log_run, set_echo
from utils.paths import get_data_dir, get_runs_dir
from utils.validation import parse_angle, parse_float_list, parse_number


@pytest.mark.parametrize(
    "text, expected",
    [
        ("pi", math.pi),
        ("pi/2", math.pi / 2),
        ("3pi/2", 3 * math.pi / 2),
        ("3*pi/4", 3 * math.pi / 4),
        ("-pi", -math.pi),
        (" 2 * PI / 3 ", 2 * math.pi / 3),
        ("1.25", 1.25),
    ],
)
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("text", ["", "tau", "pi/0", "2pi/"])
def test_parse_angle_rejects(text):
    with pytest.raises(DomainError):
        parse_angle(text)


def test_parse_float_list():
    assert parse_float_list("1, 2.5,-3") == [1.0, 2.5, -3.0]
    assert parse_float_list("2,8/3") == [2.0, 8.0 / 3.0]
    assert parse_float_list("pi,pi/2", angle=True) == [math.pi, math.pi / 2]
    with pytest.raises(DomainError):
        parse_float_list(" , ")
    with pytest.raises(DomainError):
        parse_float_list("1,x")


def test_paths_follow_home_override(isolated_home):
    assert get_data_dir() == str(isolated_home)
    assert os.path.isdir(get_runs_dir())
    assert get_log_path() == os.path.join(str(isolated_home), "sleperc.log")


def test_prefs_roundtrip_and_unknown_keys():
    assert prefs.get_pref("seed", 0) == 0
    prefs.set_pref("seed", 42)
    assert prefs.get_pref("seed") == 42
    assert prefs.get_pref("colour", "x") == "x"
    with pytest.raises(KeyError):
        prefs.set_pref("colour", "red")


def test_corrupt_prefs_read_as_empty(isolated_home):
    (isolated_home / "prefs.json").write_text("{not json")
    assert prefs.get_pref("workers") is None


def test_worker_resolution_order(monkeypatch):
    prefs.set_pref("workers", 3)
    assert resolve_workers() == 3
    monkeypatch.setenv(ENV_WORKERS, "5")
    assert resolve_workers() == 5
    assert resolve_workers(2) == 2
    monkeypatch.setenv(ENV_WORKERS, "lots")
    assert resolve_workers() == (os.cpu_count() or 1)


def test_format_value():
    assert format_value(None) == ""
    assert format_value(True) == "true"
    assert format_value(0.1) == "0.1"
    assert format_value(float("nan")) == "nan"
    assert format_value(3) == "3"
    assert format_value("loewner") == "loewner"


def test_render_tables():
    rows = [{"a": 0.5, "b": None}, {"a": float("inf"), "b": "x"}]
    assert render_csv(rows, ["a", "b"]) == "a,b\n0.5,\ninf,x\n"
    assert '"a": "inf"' in render_json(rows, ["a", "b"])


def test_cancellation_token():
    token = CancellationToken()
    token.raise_if_cancelled()
    token.cancel("because")
    with pytest.raises(RunCancelled, match="because"):
        token.raise_if_cancelled()
    token.reset()
    assert not token.is_cancelled


def test_log_lines_land_in_the_file(isolated_home):
    set_echo(False)
    try:
        log_run("percolation", "arc_event", "delta=0.1", "ok", "p_hat=0.5")
    finally:
        set_echo(True)
    text = (isolated_home / "sleperc.log").read_text()
    assert "percolation arc_event | params: delta=0.1 | status: ok | result: p_hat=0.5" in text


def test_progress_line_and_status_row():
    stream = io.StringIO()
    line = ProgressLine("arc", stream=stream)
    line(50, 100, 2)
    assert stream.getvalue() == ""
    line.complete()
    assert stream.getvalue() == "arc  ·  50 / 100  ·  2 rejected  ·  done\n"
    quiet = io.StringIO()
    ProgressLine("x", stream=quiet, enabled=False).complete()
    assert quiet.getvalue() == ""
    assert status_row("fail", "reflection", detail="measured=1") == "[FAIL ] reflection: measured=1"


@pytest.mark.parametrize(
    "text, expected",
    [("8/3", 8.0 / 3.0), (" -1/4 ", -0.25), ("1e-3", 1e-3), ("7", 7.0)],
)
def test_parse_number(text, expected):
    assert parse_number(text) == expected


@pytest.mark.parametrize("text", ["", "1/0", "8/", "three", "pi/2"])
def test_parse_number_rejects(text):
    with pytest.raises(DomainError) as err:
        parse_number(text)
    assert err.value.code == "bad_number"
