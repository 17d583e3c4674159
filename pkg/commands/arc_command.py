"""`arc`: percolation estimates of the arc event across a theta sweep.

Two rows per theta come from the same samples: `indicator` (the event
itself) and `x_statistic` (the nested-cluster statistic). `--dump PATH`
also writes sample 0's coloring as a text grid.
"""

from __future__ import annotations

from commands.config import ExperimentConfig, emit_rows, make_row
from components import ProgressLine
from constants import DEFAULT_ARC_SAMPLES, DEFAULT_DELTA, EXIT_OK
from core.errors import DomainError
from core.formulas import arc_event_probability, supported_theta, theta_to_halfplane_point
from core.montecarlo import sample_stream, z_score
from core.percolation import build_disk_lattice, dump_coloring, estimate_arc_sweep, sample_coloring
from utils.cancellation import CancellationToken
from utils.logger import log_system


def _dump_sample(config: ExperimentConfig, lattice) -> None:
    coloring = sample_coloring(lattice, sample_stream(config.seed, 0), index=0)
    with open(config.dump, "w", encoding="utf-8") as f:
        f.write(dump_coloring(lattice, coloring._replace(seed=config.seed)))
    log_system(f"dumped sample 0 ({lattice.n_sites} sites) to {config.dump}")


def cmd_arc_sweep(config: ExperimentConfig, *, cancel: CancellationToken | None = None) -> int:
    if not config.thetas:
        raise DomainError("arc needs --theta", code="missing_theta")
    for theta in config.thetas:
        if not supported_theta(theta):
            raise DomainError(f"theta must lie in [1e-8, 2*pi - 1e-8], got {theta!r}", code="theta_range")
    delta = config.delta if config.delta is not None else DEFAULT_DELTA
    n = config.n if config.n is not None else DEFAULT_ARC_SAMPLES

    lattice = build_disk_lattice(delta, config.margin)
    log_system(
        f"arc: delta={delta:.4g} margin={lattice.margin:.4g} sites={lattice.n_sites} "
        f"thetas={len(config.thetas)} n={n} seed={config.seed} workers={config.workers}"
    )
    if config.dump:
        _dump_sample(config, lattice)

    progress = ProgressLine(f"arc delta={delta:.4g}", enabled=not config.quiet)
    sweep = estimate_arc_sweep(
        delta,
        config.thetas,
        n,
        config.seed,
        lattice=lattice,
        workers=config.workers,
        cancel=cancel,
        progress=progress,
    )
    progress.complete()

    rows = []
    for theta, pair in sweep.items():
        exact = arc_event_probability(theta)
        pre = theta_to_halfplane_point(theta)
        for method, estimate in zip(("indicator", "x_statistic"), pair):
            rows.append(
                make_row(
                    "arc_event",
                    kappa=6.0,
                    theta=theta,
                    x0=pre.x0,
                    y0=pre.y0,
                    delta=delta,
                    n=estimate.n,
                    method=method,
                    p_hat=estimate.p_hat,
                    se=estimate.std_err,
                    ci_low=estimate.ci_low,
                    ci_high=estimate.ci_high,
                    formula=exact,
                    z=z_score(estimate, exact),
                    seed=estimate.seed,
                    rejected=estimate.rejected,
                    bias=estimate.p_hat - exact,
                    margin=lattice.margin,
                )
            )
    emit_rows(config, rows, "arc")
    return EXIT_OK
