"""Parsed run configuration and result-row plumbing shared by the subcommands.

`ExperimentConfig.from_args` turns the argparse namespace into validated
values, applying flag > environment > prefs.json > default. `make_row`
fills one result row in the fixed CSV schema, and `emit_rows` writes the
table in the requested format.
"""

from __future__ import annotations

import argparse
from typing import NamedTuple

from constants import (
    APP_VERSION,
    CSV_COLUMNS,
    DEFAULT_SEED,
    OUTPUT_FORMATS,
)
from core.errors import DomainError
from utils import prefs
from utils.export import default_output_path, write_csv, write_json
from utils.executor import resolve_workers
from utils.logger import log_system
from utils.validation import parse_float_list


class ExperimentConfig(NamedTuple):
    subcommand: str
    kappas: tuple[float, ...] = ()
    thetas: tuple[float, ...] = ()
    points: tuple[tuple[float, float], ...] = ()
    delta: float | None = None
    margin: float | None = None
    n: int | None = None
    seed: int = DEFAULT_SEED
    step: float | None = None
    escape: float | None = None
    max_steps: int | None = None
    methods: tuple[str, ...] = ()
    escape_correction: bool = True
    workers: int = 1
    output: str | None = None
    fmt: str = "csv"
    save: bool = False
    suite: str = "all"
    inject_fault: str | None = None
    dump: str | None = None
    quiet: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> ExperimentConfig:
        get = vars(args).get

        kappas = tuple(parse_float_list(get("kappa"))) if get("kappa") else ()
        thetas = tuple(parse_float_list(get("theta"), angle=True)) if get("theta") else ()
        points = _points(get("x0"), get("y0"))
        methods = tuple(m.strip() for m in get("method").split(",") if m.strip()) if get("method") else ()

        seed = get("seed")
        if seed is None:
            seed = prefs.get_pref("seed", DEFAULT_SEED)
        fmt = get("format") or prefs.get_pref("format", "csv")
        if fmt not in OUTPUT_FORMATS:
            raise DomainError(f"format must be one of {OUTPUT_FORMATS}, got {fmt!r}", code="format")

        return cls(
            subcommand=args.command,
            kappas=kappas,
            thetas=thetas,
            points=points,
            delta=get("delta"),
            margin=get("margin"),
            n=get("n"),
            seed=int(seed),
            step=get("step"),
            escape=get("escape"),
            max_steps=get("max_steps"),
            methods=methods,
            escape_correction=not get("no_escape_correction", False),
            workers=resolve_workers(get("workers")),
            output=get("output"),
            fmt=fmt,
            save=bool(get("save", False)),
            suite=get("suite") or "all",
            inject_fault=get("inject_fault"),
            dump=get("dump"),
            quiet=bool(get("quiet", False)),
        )


def _points(x0_text: str | None, y0_text: str | None) -> tuple[tuple[float, float], ...]:
    """Pair up --x0/--y0 lists; a single value broadcasts against the other list."""
    if not x0_text and not y0_text:
        return ()
    if not (x0_text and y0_text):
        raise DomainError("--x0 and --y0 must be given together", code="point_incomplete")
    xs = parse_float_list(x0_text)
    ys = parse_float_list(y0_text)
    if len(xs) == 1:
        xs = xs * len(ys)
    if len(ys) == 1:
        ys = ys * len(xs)
    if len(xs) != len(ys):
        raise DomainError(
            f"--x0 has {len(xs)} values but --y0 has {len(ys)}", code="point_mismatch"
        )
    return tuple(zip(xs, ys))


def make_row(experiment: str, **fields) -> dict:
    """One row of the result table; unknown keys are rejected."""
    unknown = set(fields) - set(CSV_COLUMNS)
    if unknown:
        raise KeyError(f"unknown result columns {sorted(unknown)}")
    row = dict.fromkeys(CSV_COLUMNS)
    row.update(fields, experiment=experiment, version=APP_VERSION)
    return row


def emit_rows(config: ExperimentConfig, rows: list[dict], prefix: str) -> None:
    path = config.output
    if path is None and config.save:
        path = default_output_path(prefix, config.fmt)
    writer = write_json if config.fmt == "json" else write_csv
    written = writer(rows, CSV_COLUMNS, path)
    if written:
        log_system(f"wrote {len(rows)} rows to {written}")
