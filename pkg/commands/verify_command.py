"""`verify`: run the invariant suites and print one PASS/FAIL row per check.

Each check reports what it measured next to the bound it was held to. The
`montecarlo` suite runs full-size statistical comparisons and is left out
of `all`. `--inject-fault odd-symmetry` swaps f for |f| in every
left-passage evaluation made here. The reflection check must then fail.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
from scipy import special

from commands.config import ExperimentConfig
from components import status_row
from constants import EXIT_OK, EXIT_VERIFY_FAILED, TWO_PI
from core.diffusion import SdeParams, estimate_left_passage_mc
from core.errors import DomainError, MarginExhaustedError
from core.formulas import (
    HalfPlanePoint,
    arc_event_probability,
    conformal_map_phi,
    left_passage_closed_form,
    left_passage_probability,
    theta_to_halfplane_point,
)
from core.montecarlo import combined_std_err, run_bernoulli_estimator, run_trials, summarize
from core.percolation import (
    ArcSampleEvaluator,
    build_disk_lattice,
    compute_x_statistic,
    detect_event_a,
    enumerate_colorings,
    estimate_arc_probability,
    sample_coloring,
    swap_colors,
    trace_interface_beta,
    uniform_coloring,
    with_site,
)
from core.specialfn import f_limit, gamma, hyp2f1_half, schramm_f
from utils.cancellation import CancellationToken
from utils.logger import log_run, log_system

FAULTS = ("odd-symmetry",)
ODE_KAPPAS = (2.0, 3.0, 6.0, 7.5)
MICRO_DELTA = 1.2


class CheckResult(NamedTuple):
    name: str
    measured: float
    bound: float
    passed: bool


class VerifyContext(NamedTuple):
    config: ExperimentConfig
    f: Callable[[float, float], float]
    cancel: CancellationToken | None

    def passage(self, kappa: float, x0: float, y0: float) -> float:
        """Left-passage probability built from this run's f."""
        if self.f is schramm_f:
            return left_passage_probability(kappa, HalfPlanePoint(x0, y0))
        return 0.5 + self.f(kappa, x0 / y0) / (2.0 * f_limit(kappa))


def _at_most(name: str, measured: float, bound: float) -> CheckResult:
    return CheckResult(name, float(measured), bound, bool(measured <= bound))


def _grid_points(count: int = 1000) -> list[tuple[float, float]]:
    """Points with x0/y0 spread over [-10, 10] and y0 over [0.25, 4.25]."""
    points = []
    for i in range(count):
        w = -10.0 + 20.0 * i / (count - 1)
        y0 = 0.25 + 4.0 * (i % 17) / 16.0
        points.append((w * y0, y0))
    return points


def _theta_grid(count: int = 1000) -> np.ndarray:
    return np.linspace(0.01, TWO_PI - 0.01, count)


# ----------------------------------------------------------------------
# Formula suites
# ----------------------------------------------------------------------


def check_special_cases(ctx: VerifyContext) -> list[CheckResult]:
    results = []
    points = _grid_points()
    for kappa, label in ((2.0, "2"), (8.0 / 3.0, "8/3"), (4.0, "4"), (8.0, "8")):
        worst = 0.0
        for x0, y0 in points:
            closed = left_passage_closed_form(kappa, HalfPlanePoint(x0, y0))
            series = 0.5 if kappa == 8 else ctx.passage(kappa, x0, y0)
            worst = max(worst, abs(series - closed))
        results.append(_at_most(f"special_case_kappa_{label}", worst, 1e-9))
    return results


def check_symmetry(ctx: VerifyContext) -> list[CheckResult]:
    points = _grid_points()
    reflection = scaling = 0.0
    for kappa in ODE_KAPPAS:
        for x0, y0 in points:
            p = ctx.passage(kappa, x0, y0)
            reflection = max(reflection, abs(ctx.passage(kappa, -x0, y0) + p - 1.0))
            scaling = max(scaling, abs(ctx.passage(kappa, 3.7 * x0, 3.7 * y0) - p))
    complement = max(
        abs(arc_event_probability(t) + arc_event_probability(TWO_PI - t) - 1.0) for t in _theta_grid()
    )
    return [
        _at_most("reflection", reflection, 1e-12),
        _at_most("scale_invariance", scaling, 1e-12),
        _at_most("arc_complement", complement, 1e-12),
    ]


def check_ode(ctx: VerifyContext) -> list[CheckResult]:
    s = 1e-4
    ws = np.linspace(-5.0, 5.0, 1001)
    results = []
    for kappa in ODE_KAPPAS:
        worst = 0.0
        for w in ws:
            h_minus, h_mid, h_plus = (ctx.passage(kappa, w + d, 1.0) for d in (-s, 0.0, s))
            second = (h_plus - 2.0 * h_mid + h_minus) / (s * s)
            first = (h_plus - h_minus) / (2.0 * s)
            worst = max(worst, abs(0.5 * kappa * second + 4.0 * w / (w * w + 1.0) * first))
        results.append(_at_most(f"ode_residual_kappa_{kappa:g}", worst, 1e-5))

    derivative = 0.0
    for kappa in ODE_KAPPAS:
        for w in ws:
            slope = (ctx.f(kappa, w + s) - ctx.f(kappa, w - s)) / (2.0 * s)
            derivative = max(derivative, abs(slope - (1.0 + w * w) ** (-4.0 / kappa)))
    results.append(_at_most("f_derivative", derivative, 1e-7))
    return results


def check_linkage(ctx: VerifyContext) -> list[CheckResult]:
    link = preimage = boundary = 0.0
    for t in _theta_grid():
        c = 1.0 / math.tan(t / 2.0)
        link = max(link, abs(arc_event_probability(t) - ctx.passage(6.0, -c, 1.0)))
        pre = theta_to_halfplane_point(t)
        preimage = max(preimage, abs(conformal_map_phi(t, complex(pre.x0, pre.y0))))
        boundary = max(boundary, abs(conformal_map_phi(t, 0j) - 1.0))
    return [
        _at_most("arc_equals_kappa6_passage", link, 1e-12),
        _at_most("phi_maps_preimage_to_centre", preimage, 1e-12),
        _at_most("phi_maps_zero_to_one", boundary, 1e-12),
    ]


def check_special(ctx: VerifyContext) -> list[CheckResult]:
    xs = np.linspace(0.05, 20.0, 400)
    gamma_err = max(abs(gamma(x) / special.gamma(x) - 1.0) for x in xs)

    hyp_err = 0.0
    for b in (0.55, 2.0 / 3.0, 1.0, 4.0 / 3.0, 2.0, 4.0):
        for z in -np.logspace(-3, 3, 200):
            ref = special.hyp2f1(0.5, b, 1.5, z)
            hyp_err = max(hyp_err, abs(hyp2f1_half(b, z) / ref - 1.0))

    violations = 0
    ws = np.linspace(-50.0, 50.0, 2001)
    for kappa in ODE_KAPPAS:
        values = [ctx.f(kappa, w) for w in ws]
        lim = f_limit(kappa)
        violations += sum(hi <= lo for lo, hi in zip(values, values[1:]))
        violations += sum(abs(v) >= lim for v in values)

    convergence_breaks = 0
    tail_excess = -math.inf
    for kappa in ODE_KAPPAS:
        lim = f_limit(kappa)
        b = 4.0 / kappa
        gaps = [lim - ctx.f(kappa, 10.0**k) for k in range(1, 7)]
        convergence_breaks += sum(g < 0 for g in gaps)
        convergence_breaks += sum(later > earlier for earlier, later in zip(gaps, gaps[1:]))
        for k, gap in enumerate(gaps, start=1):
            # int_w^inf (1+t^2)^{-b} dt < w^{1-2b} / (2b-1)
            bound = (10.0**k) ** (1.0 - 2.0 * b) / (2.0 * b - 1.0)
            tail_excess = max(tail_excess, (gap - bound) / lim)
    return [
        _at_most("gamma_vs_reference", gamma_err, 1e-12),
        _at_most("hyp2f1_vs_reference", hyp_err, 1e-9),
        _at_most("f_monotone_bounded", violations, 0),
        _at_most("f_converges_to_limit", convergence_breaks, 0),
        _at_most("f_tail_bound", tail_excess, 1e-12),
    ]


# ----------------------------------------------------------------------
# Percolation suite
# ----------------------------------------------------------------------


def _micro_checks(ctx: VerifyContext) -> list[CheckResult]:
    # Event and X read only in-disk bits, so the in-disk enumeration is the
    # exact law on this lattice.
    lattice = build_disk_lattice(MICRO_DELTA, 0.0)
    colorings = list(enumerate_colorings(lattice))
    thetas = (math.pi / 2, math.pi, 3 * math.pi / 2)
    evaluator = ArcSampleEvaluator(lattice, thetas)

    def _trial(index, rng):
        return evaluator.evaluate_coloring(lattice, colorings[index])

    table = run_trials(_trial, len(colorings), ctx.config.seed, workers=ctx.config.workers)
    results = []
    for j, theta in enumerate(thetas):
        exact = sum(detect_event_a(lattice, c, theta) for c in colorings) / len(colorings)
        indicator = summarize(table.values[:, 2 * j], seed=ctx.config.seed).p_hat
        mean_x = summarize(table.values[:, 2 * j + 1], seed=ctx.config.seed).p_hat
        gap = max(abs(indicator - exact), abs(mean_x - exact))
        results.append(_at_most(f"micro_oracle_theta_{theta:.4f}", gap, 1e-12))

    origin = lattice.origin_site
    ring = lattice.neighbors[origin]
    closed = uniform_coloring(lattice, False)
    for site in ring:
        closed = with_site(closed, site, True)
    gap_site = lattice.site_of(*(lattice.coords[origin] + (1, -1)))
    opened = with_site(closed, gap_site, False)
    full = compute_x_statistic(lattice, closed, math.pi)
    broken = compute_x_statistic(lattice, opened, math.pi)
    mismatches = sum(
        (
            not full.event_a,
            full.m != 2,
            full.x_stat != 0.5,
            broken.event_a,
            broken.x_stat != 0.0,
        )
    )
    results.append(_at_most("ring_example", mismatches, 0))
    return results


def _black_monotonicity(ctx: VerifyContext) -> CheckResult:
    lattice = build_disk_lattice(0.3, 0.3)
    disk_sites = np.flatnonzero(lattice.in_disk)
    violations = 0
    for index in range(50):
        coloring = sample_coloring(lattice, np.random.default_rng([ctx.config.seed, index]))
        for theta in (math.pi / 2, math.pi):
            if not detect_event_a(lattice, coloring, theta):
                continue
            for site in disk_sites:
                if not coloring.bits[site]:
                    flipped = with_site(coloring, site, True)
                    violations += not detect_event_a(lattice, flipped, theta)
    return _at_most("black_monotonicity", violations, 0)


def _sample_checks(ctx: VerifyContext) -> list[CheckResult]:
    lattice = build_disk_lattice(1.0 / 30.0)
    n = ctx.config.n or 1000
    small, large = math.pi / 2, 3 * math.pi / 2

    def _trial(index, rng):
        coloring = sample_coloring(lattice, rng, index=index)
        try:
            a = compute_x_statistic(lattice, coloring, small)
            b = compute_x_statistic(lattice, coloring, large)
            rest = compute_x_statistic(lattice, coloring, TWO_PI - small, arc_start=small)
        except MarginExhaustedError:
            return None
        swapped = detect_event_a(lattice, swap_colors(coloring), TWO_PI - small, arc_start=small)
        return (
            float(not (a.identity_holds and b.identity_holds)),
            float(a.event_a and not b.event_a),
            float(trace_interface_beta(lattice, coloring, small) != int(a.event_a))
            + float(trace_interface_beta(lattice, coloring, large) != int(b.event_a)),
            float(a.x_stat + rest.x_stat != 1.0),
            float(int(a.event_a) + int(swapped) != 1),
        )

    table = run_trials(_trial, n, ctx.config.seed, workers=ctx.config.workers, cancel=ctx.cancel)
    counts = np.nansum(table.values, axis=0)
    names = ("event_x_identity", "arc_monotonicity", "interface_agrees", "x_complement", "coupled_complement")
    results = [_at_most(name, counts[i], 0) for i, name in enumerate(names)]
    results.append(_at_most("margin_redraws", table.rejected_rows, 0.001 * n))
    return results


def check_percolation(ctx: VerifyContext) -> list[CheckResult]:
    return [*_micro_checks(ctx), _black_monotonicity(ctx), *_sample_checks(ctx)]


# ----------------------------------------------------------------------
# Statistical suite (slow)
# ----------------------------------------------------------------------


def check_montecarlo(ctx: VerifyContext) -> list[CheckResult]:
    cfg = ctx.config
    kwargs = {"workers": cfg.workers, "cancel": ctx.cancel}
    results = []

    sle_n = cfg.n or 100_000
    worst = 0.0
    for kappa in (2.0, 8.0 / 3.0, 4.0, 6.0):
        params = SdeParams.checked(kappa)
        for x0, y0 in ((0.0, 1.0), (1.0, 1.0), (-1.0, 2.0)):
            exact = left_passage_probability(kappa, HalfPlanePoint(x0, y0))
            for method in ("w_diffusion", "loewner"):
                est = estimate_left_passage_mc(params, HalfPlanePoint(x0, y0), sle_n, cfg.seed, method, **kwargs)
                worst = max(worst, abs(est.p_hat - exact) / max(3.0 * est.std_err, 0.01))
    results.append(_at_most("sle_vs_formula", worst, 1.0))

    arc_n = cfg.n or 20_000
    arc_gap = 0.0
    half = None
    for theta in (math.pi / 2, math.pi, 3 * math.pi / 2):
        indicator, _ = estimate_arc_probability(1.0 / 75.0, theta, arc_n, cfg.seed, **kwargs)
        arc_gap = max(arc_gap, abs(indicator.p_hat - arc_event_probability(theta)))
        if theta == math.pi:
            half = indicator.p_hat
    results.append(_at_most("arc_vs_formula", arc_gap, 0.02))
    results.append(_at_most("arc_half_turn", abs(half - 0.5), 0.02))

    exact = arc_event_probability(math.pi / 2)
    coarse, _ = estimate_arc_probability(1.0 / 40.0, math.pi / 2, arc_n, cfg.seed, **kwargs)
    fine, _ = estimate_arc_probability(1.0 / 100.0, math.pi / 2, arc_n, cfg.seed, **kwargs)
    combined = combined_std_err(coarse, fine)
    shrink = abs(fine.p_hat - exact) - abs(coarse.p_hat - exact) - 2.0 * combined
    results.append(_at_most("arc_bias_shrinks", shrink, 0.0))

    covered = 0
    for rep in range(200):
        est = run_bernoulli_estimator(lambda i, rng: float(rng.random() < 0.3), 500, rep, **kwargs)
        covered += est.ci_low <= 0.3 <= est.ci_high
    results.append(CheckResult("ci_calibration", covered, 180, covered >= 180))
    return results


SUITES: dict[str, Callable[[VerifyContext], list[CheckResult]]] = {
    "specialcases": check_special_cases,
    "symmetry": check_symmetry,
    "ode": check_ode,
    "linkage": check_linkage,
    "special": check_special,
    "percolation": check_percolation,
    "montecarlo": check_montecarlo,
}
DEFAULT_SUITES = tuple(name for name in SUITES if name != "montecarlo")


def _abs_f(kappa: float, w: float) -> float:
    return abs(schramm_f(kappa, w))


def run_suites(config: ExperimentConfig, cancel: CancellationToken | None = None) -> list[CheckResult]:
    if config.suite == "all":
        names = DEFAULT_SUITES
    elif config.suite in SUITES:
        names = (config.suite,)
    else:
        raise DomainError(
            f"suite must be 'all' or one of {tuple(SUITES)}, got {config.suite!r}", code="suite"
        )
    if config.inject_fault not in (None, *FAULTS):
        raise DomainError(f"fault must be one of {FAULTS}, got {config.inject_fault!r}", code="fault")
    f = _abs_f if config.inject_fault == "odd-symmetry" else schramm_f
    ctx = VerifyContext(config, f, cancel)

    results = []
    for name in names:
        log_system(f"verify: running suite {name}")
        suite_results = SUITES[name](ctx)
        failed = [r.name for r in suite_results if not r.passed]
        log_run("verify", name, f"seed={config.seed} fault={config.inject_fault}", "fail" if failed else "ok",
                f"checks={len(suite_results)} failed={failed}")
        results.extend(suite_results)
    return results


def cmd_verify(config: ExperimentConfig, *, cancel: CancellationToken | None = None) -> int:
    results = run_suites(config, cancel)
    for r in results:
        detail = f"measured={r.measured:.6g} bound={r.bound:.6g}"
        print(status_row("pass" if r.passed else "fail", r.name, detail=detail))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK
