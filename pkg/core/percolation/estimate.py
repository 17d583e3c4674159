"""Monte Carlo estimate of the arc event probability.

Each sample draws one coloring from its own stream and evaluates every
requested arc against it. The nested-cluster chain does not depend on the
arc, so it is computed once per sample. The evaluator returns the values
(event_1, X_1, event_2, X_2, ...), and the harness gathers them in sample
order.
"""

from __future__ import annotations

import threading
from collections.abc import Sequence

import numpy as np

from constants import REDRAW_BUDGET
from core.errors import BudgetExceededError, MarginExhaustedError
from core.formulas import ArcAngle
from core.montecarlo import McEstimate, TrialOutcome, run_trials, summarize
from core.percolation.clusters import disk_clusters, same_color_clusters
from core.percolation.coloring import Coloring, sample_coloring
from core.percolation.events import detect_event_a, nested_chain, x_from_chain
from core.percolation.lattice import DiskLattice, build_disk_lattice
from utils.logger import log_run, log_system
from utils.validation import require_at_least

# Margin doublings tried before a sample is given up on.
MAX_MARGIN_LEVELS = 6


class ArcSampleEvaluator:
    """Callable trial for `run_trials`: (index, rng) -> TrialOutcome."""

    def __init__(self, lattice: DiskLattice, thetas: Sequence[float]):
        self.thetas = tuple(ArcAngle.checked(t).theta for t in thetas)
        self._lattices = [lattice]
        self._lock = threading.Lock()
        self._prepare(lattice)

    def _prepare(self, lattice: DiskLattice) -> None:
        # Builds the per-arc incidence up front; raises on degenerate endpoints.
        for theta in self.thetas:
            lattice.arc_incidence(theta)

    def lattice_at(self, level: int) -> DiskLattice:
        """The lattice with margin doubled `level` times, built on first use."""
        with self._lock:
            while len(self._lattices) <= level:
                base = self._lattices[-1]
                margin = max(2.0 * base.margin, base.delta)
                log_system(f"margin exhausted; rebuilding lattice with margin={margin:.4g}", level="WARN")
                wider = build_disk_lattice(base.delta, margin, offset=base.offset)
                self._prepare(wider)
                self._lattices.append(wider)
            return self._lattices[level]

    def evaluate(self, lattice: DiskLattice, rng: np.random.Generator, index: int | None = None):
        return self.evaluate_coloring(lattice, sample_coloring(lattice, rng, index=index))

    def evaluate_coloring(self, lattice: DiskLattice, coloring: Coloring) -> tuple[float, ...]:
        """(event_1, X_1, event_2, X_2, ...) for one given coloring."""
        disk = disk_clusters(lattice, coloring)
        chain = nested_chain(lattice, coloring, full=same_color_clusters(lattice, coloring), disk=disk)
        values: list[float] = []
        for theta in self.thetas:
            event = detect_event_a(lattice, coloring, theta, disk=disk)
            values.append(float(event))
            values.append(x_from_chain(chain, lattice.arc_incidence(theta)))
        return tuple(values)

    def __call__(self, index: int, rng: np.random.Generator) -> TrialOutcome:
        for level in range(MAX_MARGIN_LEVELS + 1):
            try:
                return TrialOutcome(self.evaluate(self.lattice_at(level), rng, index), level)
            except MarginExhaustedError:
                continue
        return TrialOutcome(None, MAX_MARGIN_LEVELS + 1)


def estimate_arc_sweep(
    delta: float,
    thetas: Sequence[float],
    n_samples: int,
    seed: int,
    *,
    margin: float | None = None,
    lattice: DiskLattice | None = None,
    **kwargs,
) -> dict[float, tuple[McEstimate, McEstimate]]:
    """
    {theta: (indicator estimate, X estimate)} from one pass over the samples.

    Raises BudgetExceededError when redrawn samples exceed the redraw budget.
    """
    require_at_least("n_samples", n_samples, 1)
    lattice = lattice if lattice is not None else build_disk_lattice(delta, margin)
    evaluator = ArcSampleEvaluator(lattice, thetas)
    table = run_trials(evaluator, n_samples, seed, **kwargs)
    if table.redraws > REDRAW_BUDGET * n_samples:
        raise BudgetExceededError(
            f"{table.redraws} of {n_samples} samples needed a wider margin"
            f" (budget {REDRAW_BUDGET:.1%})",
            code="redraw_budget",
            rejected=table.redraws,
            n=n_samples,
        )
    out: dict[float, tuple[McEstimate, McEstimate]] = {}
    for j, theta in enumerate(evaluator.thetas):
        indicator = summarize(table.values[:, 2 * j], seed=seed, redraws=table.redraws)
        x_stat = summarize(table.values[:, 2 * j + 1], seed=seed, redraws=table.redraws)
        out[theta] = (indicator, x_stat)
        log_run(
            "percolation",
            "arc_event",
            f"delta={lattice.delta!r} theta={theta!r} margin={lattice.margin!r} "
            f"sites={lattice.n_sites} n={n_samples} seed={seed}",
            "ok",
            f"p_hat={indicator.p_hat:.6f} x_mean={x_stat.p_hat:.6f} "
            f"se={indicator.std_err:.6f} redraws={table.redraws}",
        )
    return out


def estimate_arc_probability(
    delta: float,
    theta: float,
    n_samples: int,
    seed: int,
    **kwargs,
) -> tuple[McEstimate, McEstimate]:
    """The (indicator, X) pair for a single arc."""
    sweep = estimate_arc_sweep(delta, [theta], n_samples, seed, **kwargs)
    return next(iter(sweep.values()))
