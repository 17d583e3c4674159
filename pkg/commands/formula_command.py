"""`formula`: evaluate the closed forms without simulating anything.

Each (kappa, z0) pair gives a `series` row from the hypergeometric formula
and, for kappa in {2, 8/3, 4, 8}, a `closed_form` row next to it. Each theta
gives an arc-event row whose x0 and y0 are the half-plane preimage of the
disk centre.
"""

from __future__ import annotations

from commands.config import ExperimentConfig, emit_rows, make_row
from constants import EXIT_OK
from core.errors import DomainError
from core.formulas import (
    CLOSED_FORM_KAPPAS,
    HalfPlanePoint,
    arc_event_probability,
    left_passage_closed_form,
    left_passage_probability,
    theta_to_halfplane_point,
)
from utils.cancellation import CancellationToken
from utils.logger import log_run


def _has_closed_form(kappa: float) -> bool:
    return any(abs(kappa - k) <= 1e-12 for k in CLOSED_FORM_KAPPAS)


def formula_rows(config: ExperimentConfig) -> list[dict]:
    if config.points and not config.kappas:
        raise DomainError("--x0/--y0 need --kappa", code="missing_kappa")
    if config.kappas and not config.points:
        raise DomainError("--kappa needs --x0 and --y0", code="missing_point")
    if not (config.points or config.thetas):
        raise DomainError("give --kappa with --x0/--y0, or --theta", code="nothing_to_do")

    rows = []
    for kappa in config.kappas:
        for x0, y0 in config.points:
            p = HalfPlanePoint.checked(x0, y0)
            value = left_passage_probability(kappa, p)
            rows.append(make_row("left_passage", kappa=kappa, x0=x0, y0=y0, method="series", formula=value))
            if _has_closed_form(kappa):
                closed = left_passage_closed_form(kappa, p)
                rows.append(
                    make_row("left_passage", kappa=kappa, x0=x0, y0=y0, method="closed_form", formula=closed)
                )
    for theta in config.thetas:
        value = arc_event_probability(theta)
        pre = theta_to_halfplane_point(theta)
        rows.append(
            make_row("arc_event", kappa=6.0, theta=theta, x0=pre.x0, y0=pre.y0, method="series", formula=value)
        )
    return rows


def cmd_formula(config: ExperimentConfig, *, cancel: CancellationToken | None = None) -> int:
    rows = formula_rows(config)
    log_run(
        "formula",
        "evaluate",
        f"kappas={list(config.kappas)} points={len(config.points)} thetas={len(config.thetas)}",
        "ok",
        f"rows={len(rows)}",
    )
    emit_rows(config, rows, "formula")
    return EXIT_OK
