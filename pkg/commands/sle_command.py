"""`sle`: Monte Carlo left-passage estimates next to the exact formula."""

from __future__ import annotations

from commands.config import ExperimentConfig, emit_rows, make_row
from components import ProgressLine
from constants import (
    DEFAULT_ESCAPE,
    DEFAULT_MAX_STEPS,
    DEFAULT_SLE_SAMPLES,
    DEFAULT_STEP,
    EXIT_OK,
)
from core.diffusion import METHODS, SdeParams, estimate_left_passage_mc
from core.errors import DomainError
from core.formulas import HalfPlanePoint, left_passage_probability
from core.montecarlo import z_score
from utils.cancellation import CancellationToken
from utils.logger import log_system


def cmd_sle_left_passage(config: ExperimentConfig, *, cancel: CancellationToken | None = None) -> int:
    if not (config.kappas and config.points):
        raise DomainError("sle needs --kappa, --x0 and --y0", code="missing_point")
    methods = config.methods or ("w_diffusion",)
    for method in methods:
        if method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {method!r}", code="method")
    n = config.n if config.n is not None else DEFAULT_SLE_SAMPLES

    # Validate every input before the first (long) estimate starts.
    jobs = []
    for kappa in config.kappas:
        params = SdeParams.checked(
            kappa,
            config.step if config.step is not None else DEFAULT_STEP,
            config.escape if config.escape is not None else DEFAULT_ESCAPE,
            config.max_steps if config.max_steps is not None else DEFAULT_MAX_STEPS,
            config.escape_correction,
        )
        for x0, y0 in config.points:
            p = HalfPlanePoint.checked(x0, y0)
            jobs.extend((params, p, method) for method in methods)

    log_system(f"sle: {len(jobs)} estimates, n={n}, seed={config.seed}, workers={config.workers}")
    rows = []
    for params, p, method in jobs:
        progress = ProgressLine(f"kappa={params.kappa:g} z0={p.x0:g}+{p.y0:g}i {method}", enabled=not config.quiet)
        estimate = estimate_left_passage_mc(
            params, p, n, config.seed, method, workers=config.workers, cancel=cancel, progress=progress
        )
        progress.complete()
        exact = left_passage_probability(params.kappa, p)
        rows.append(
            make_row(
                "left_passage",
                kappa=params.kappa,
                x0=p.x0,
                y0=p.y0,
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
                step=params.step,
                escape=params.escape,
                max_steps=params.max_steps,
                escape_correction=params.escape_correction,
            )
        )
        if estimate.bias_bound:
            log_system(f"escape correction off: bias up to {estimate.bias_bound:.3g}", level="WARN")
    emit_rows(config, rows, "sle")
    return EXIT_OK
