"""Monte Carlo engine for the left-passage and hitting probabilities.

Two simulators are integrated with Euler–Maruyama. Both use the same
per-path noise.

* `w_diffusion`: the u-time diffusion dw = -dW~ + 4w/(w^2+1) du, where
  Var(dW~) = kappa du. Each step advances u by `step * (1 + w^2)`, so a path
  crosses every dyadic scale of |w| in about the same number of steps.
* `loewner`: the point flow dx = 2x dt/(x^2+y^2) - dW, dy = -2y dt/(x^2+y^2)
  with dt = step * (x^2 + y^2). Once y drops below `LOEWNER_RESCALE_FLOOR`
  times its start, (x, y) is rescaled to (x/y, 1). Brownian scaling leaves
  the law unchanged, and y never underflows.

The curve passes left of z0 exactly when w = x/y runs off to +inf. A path
that reaches |w| >= escape is settled by one draw from its own stream. The
chance that it still ends at +inf is the hitting probability from where it
stopped. That draw makes the estimator unbiased. `escape_correction=False`
uses the sign instead, and the estimate reports the resulting `bias_bound`.

Path i of a run keyed by `seed` uses `sample_stream(seed, i)`. One uniform
is drawn first (for the escape draw). Normals follow in blocks of
`NOISE_CHUNK`. The outcome therefore depends only on (seed, i, params) and
never on how paths are batched.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from typing import NamedTuple

import numpy as np

from constants import (
    DEFAULT_ESCAPE,
    DEFAULT_MAX_STEPS,
    DEFAULT_STEP,
    LOEWNER_RESCALE_FLOOR,
    MIN_ESCAPE,
    NOISE_CHUNK,
    TRUNCATION_BUDGET,
)
from core.errors import BudgetExceededError, DomainError
from core.formulas import HalfPlanePoint, HittingWindow
from core.montecarlo import (
    BatchResult,
    McEstimate,
    run_batched_trials,
    sample_stream,
    summarize,
)
from core.specialfn import f_limit, schramm_f
from utils.logger import log_run
from utils.validation import require_at_least, require_kappa, require_positive

METHODS = ("w_diffusion", "loewner")
# Paths integrated together in one vectorized batch.
PATH_BATCH = 4096


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    HIT_B = "hit_b"
    HIT_A = "hit_a"
    NONE = "none"


class SdeParams(NamedTuple):
    kappa: float
    step: float = DEFAULT_STEP
    escape: float = DEFAULT_ESCAPE
    max_steps: int = DEFAULT_MAX_STEPS
    escape_correction: bool = True

    @classmethod
    def checked(
        cls,
        kappa: float,
        step: float = DEFAULT_STEP,
        escape: float = DEFAULT_ESCAPE,
        max_steps: int = DEFAULT_MAX_STEPS,
        escape_correction: bool = True,
    ) -> SdeParams:
        require_kappa(kappa, allow_eight=True)
        require_positive("step", step)
        if not step < 0.5:
            raise DomainError(f"step must be < 0.5, got {step!r}", code="step_range")
        require_at_least("escape", escape, MIN_ESCAPE)
        require_at_least("max_steps", max_steps, 1)
        return cls(float(kappa), float(step), float(escape), int(max_steps), bool(escape_correction))


class PathOutcome(NamedTuple):
    side: Side
    steps_used: int
    truncated: bool


class _Levels(NamedTuple):
    """Absorbing levels; an infinite end is simulated as the escape level."""

    lower: float
    upper: float
    a: float
    b: float

    @classmethod
    def for_window(cls, win: HittingWindow | None, escape: float) -> _Levels:
        a, b = (-math.inf, math.inf) if win is None else (win.a, win.b)
        lower = a if math.isfinite(a) else -escape
        upper = b if math.isfinite(b) else escape
        return cls(lower, upper, a, b)

    @property
    def has_escape(self) -> bool:
        return not (math.isfinite(self.a) and math.isfinite(self.b))


# ----------------------------------------------------------------------
# Escape settlement
# ----------------------------------------------------------------------


def _keep_probability(kappa: float, levels: _Levels, w_end: float) -> float:
    """Chance that a path stopped at w_end past an escape level really ends there."""
    if kappa == 8:
        return 0.5
    lim = f_limit(kappa)
    if w_end > 0 and not math.isfinite(levels.b):
        if not math.isfinite(levels.a):
            # Computed on |w| so mirrored paths settle identically.
            return 0.5 + schramm_f(kappa, abs(w_end)) / (2.0 * lim)
        fa = schramm_f(kappa, levels.a)
        return (schramm_f(kappa, w_end) - fa) / (lim - fa)
    if w_end < 0 and not math.isfinite(levels.a):
        if not math.isfinite(levels.b):
            return 0.5 + schramm_f(kappa, abs(w_end)) / (2.0 * lim)
        fb = schramm_f(kappa, levels.b)
        return (fb - schramm_f(kappa, w_end)) / (fb + lim)
    return 1.0


def escape_bias_bound(params: SdeParams, win: HittingWindow | None = None) -> float:
    """Largest misclassification probability of the sign-at-escape rule."""
    levels = _Levels.for_window(win, params.escape)
    if not levels.has_escape:
        return 0.0
    bound = 0.0
    if not math.isfinite(levels.b):
        bound = max(bound, 1.0 - _keep_probability(params.kappa, levels, levels.upper))
    if not math.isfinite(levels.a):
        bound = max(bound, 1.0 - _keep_probability(params.kappa, levels, levels.lower))
    return bound


# ----------------------------------------------------------------------
# Vectorized integration
# ----------------------------------------------------------------------


class _NoiseBuffer:
    """Per-path normals, refilled NOISE_CHUNK at a time from each path's stream."""

    def __init__(self, gens: Sequence[np.random.Generator], sign: float):
        self._gens = gens
        self._sign = sign
        self._buf = np.empty((len(gens), NOISE_CHUNK))

    def column(self, alive: np.ndarray, k: int) -> np.ndarray:
        col = k % NOISE_CHUNK
        if col == 0:
            for i in alive:
                self._buf[i] = self._gens[i].standard_normal(NOISE_CHUNK)
        return self._sign * self._buf[alive, col]


def _integrate(
    params: SdeParams,
    model: str,
    start: tuple[np.ndarray, np.ndarray],
    gens: Sequence[np.random.Generator],
    levels: _Levels,
    mirror: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Run every path until it leaves (lower, upper) or max_steps is reached.

    Returns (code, steps): code +1 for the upper level, -1 for the lower,
    0 for truncated. An escape draw has already been applied to `code`.
    """
    kappa, step = params.kappa, params.step
    n = len(gens)
    flips = np.array([g.random() for g in gens])
    x = np.array(start[0], dtype=float)
    y = np.array(start[1], dtype=float)
    if mirror:
        x = -x
    y_floor = LOEWNER_RESCALE_FLOOR * y
    noise = _NoiseBuffer(gens, -1.0 if mirror else 1.0)

    code = np.zeros(n, dtype=np.int8)
    steps = np.full(n, params.max_steps, dtype=np.int64)
    w_end = np.zeros(n)
    alive = np.arange(n)

    def _settle(idx: np.ndarray, w: np.ndarray, k: int) -> None:
        up = w >= levels.upper
        down = w <= levels.lower
        done = up | down
        hit = idx[done]
        code[hit] = np.where(up[done], 1, -1)
        steps[hit] = k
        w_end[hit] = w[done]

    w0 = x / y
    _settle(alive, w0, 0)
    alive = alive[code[alive] == 0]
    k = 0
    while alive.size and k < params.max_steps:
        xi = noise.column(alive, k)
        if model == "w_diffusion":
            w = x[alive]
            du = step * (1.0 + w * w)
            w = w + 4.0 * w / (w * w + 1.0) * du - np.sqrt(kappa * du) * xi
            x[alive] = w
        else:
            xa, ya = x[alive], y[alive]
            r2 = xa * xa + ya * ya
            dt = step * r2
            xa = xa + 2.0 * xa * dt / r2 - np.sqrt(kappa * dt) * xi
            ya = ya - 2.0 * ya * dt / r2
            low = ya < y_floor[alive]
            if low.any():
                xa = np.where(low, xa / ya, xa)
                ya = np.where(low, 1.0, ya)
                y_floor[alive] = np.where(low, LOEWNER_RESCALE_FLOOR, y_floor[alive])
            x[alive], y[alive] = xa, ya
            w = xa / ya
        k += 1
        _settle(alive, w, k)
        alive = alive[code[alive] == 0]

    if params.escape_correction and levels.has_escape:
        escaped = np.zeros(n, dtype=bool)
        if not math.isfinite(levels.b):
            escaped |= code == 1
        if not math.isfinite(levels.a):
            escaped |= code == -1
        for i in np.flatnonzero(escaped):
            if flips[i] >= _keep_probability(kappa, levels, float(w_end[i])):
                code[i] = -code[i]
    return code, steps


def _check_model(model: str) -> None:
    if model not in METHODS:
        raise DomainError(f"method must be one of {METHODS}, got {model!r}", code="method")


def _single_path(
    params: SdeParams,
    model: str,
    start: tuple[float, float],
    rng_stream: np.random.Generator,
    window: HittingWindow | None,
    mirror: bool,
) -> PathOutcome:
    levels = _Levels.for_window(window, params.escape)
    code, steps = _integrate(
        params, model, (np.array([start[0]]), np.array([start[1]])), [rng_stream], levels, mirror
    )
    c = int(code[0])
    if c == 0:
        return PathOutcome(Side.NONE, int(steps[0]), True)
    if window is None:
        side = Side.LEFT if c > 0 else Side.RIGHT
    else:
        side = Side.HIT_B if c > 0 else Side.HIT_A
    return PathOutcome(side, int(steps[0]), False)


def simulate_w_path(
    params: SdeParams,
    w0: float,
    rng_stream: np.random.Generator,
    *,
    window: HittingWindow | None = None,
    mirror: bool = False,
) -> PathOutcome:
    """One u-time path from w0. `mirror` negates w0 and every increment."""
    if not math.isfinite(w0):
        raise DomainError(f"w0 must be finite, got {w0!r}", code="not_finite")
    if window is not None:
        window = HittingWindow.checked(*window)
        if window.w_hat != w0:
            raise DomainError("w0 must equal window.w_hat", code="window_start")
    return _single_path(params, "w_diffusion", (w0, 1.0), rng_stream, window, mirror)


def simulate_loewner_point(
    params: SdeParams,
    p: HalfPlanePoint,
    rng_stream: np.random.Generator,
    *,
    mirror: bool = False,
) -> PathOutcome:
    """One Loewner point flow from z0 = x0 + i y0, classified by w = x/y."""
    p = HalfPlanePoint.checked(*p)
    return _single_path(params, "loewner", (p.x0, p.y0), rng_stream, None, mirror)


# ----------------------------------------------------------------------
# Estimators
# ----------------------------------------------------------------------


def _batch_trial(params: SdeParams, model: str, start: tuple[float, float], levels: _Levels):
    def _trial(indices: np.ndarray, seed: int) -> BatchResult:
        gens = [sample_stream(seed, int(i)) for i in indices]
        x0 = np.full(len(indices), start[0])
        y0 = np.full(len(indices), start[1])
        code, _ = _integrate(params, model, (x0, y0), gens, levels, mirror=False)
        values = np.where(code == 1, 1.0, np.where(code == -1, 0.0, np.nan))
        return BatchResult(values[:, None])

    return _trial


def _run_estimate(
    params: SdeParams,
    model: str,
    start: tuple[float, float],
    win: HittingWindow | None,
    n_paths: int,
    seed: int,
    **kwargs,
) -> McEstimate:
    levels = _Levels.for_window(win, params.escape)
    kwargs.setdefault("chunk_size", PATH_BATCH)
    table = run_batched_trials(_batch_trial(params, model, start, levels), n_paths, seed, **kwargs)
    truncated = table.rejected_rows
    if truncated > TRUNCATION_BUDGET * n_paths:
        raise BudgetExceededError(
            f"{truncated} of {n_paths} paths truncated at max_steps={params.max_steps}"
            f" (budget {TRUNCATION_BUDGET:.0%})",
            code="truncation_budget",
            rejected=truncated,
            n=n_paths,
        )
    bias = 0.0 if params.escape_correction else escape_bias_bound(params, win)
    return summarize(table.values[:, 0], seed=seed, bias_bound=bias)


def estimate_hitting_probability(
    params: SdeParams,
    win: HittingWindow,
    n_paths: int,
    seed: int,
    **kwargs,
) -> McEstimate:
    """Fraction of w-paths from w_hat that reach b before a."""
    win = HittingWindow.checked(*win)
    if not (math.isfinite(win.a) and math.isfinite(win.b)):
        require_kappa(params.kappa)
    estimate = _run_estimate(params, "w_diffusion", (win.w_hat, 1.0), win, n_paths, seed, **kwargs)
    log_run(
        "diffusion",
        "hitting",
        f"kappa={params.kappa!r} a={win.a!r} b={win.b!r} w_hat={win.w_hat!r} "
        f"n={n_paths} seed={seed} step={params.step!r}",
        "ok",
        f"p_hat={estimate.p_hat:.6f} se={estimate.std_err:.6f} rejected={estimate.rejected}",
    )
    return estimate


def estimate_left_passage_mc(
    params: SdeParams,
    p: HalfPlanePoint,
    n_paths: int,
    seed: int,
    method: str = "w_diffusion",
    **kwargs,
) -> McEstimate:
    """Fraction of simulated curves passing to the left of z0."""
    _check_model(method)
    p = HalfPlanePoint.checked(*p)
    start = (p.w, 1.0) if method == "w_diffusion" else (p.x0, p.y0)
    estimate = _run_estimate(params, method, start, None, n_paths, seed, **kwargs)
    log_run(
        "diffusion",
        "left_passage",
        f"kappa={params.kappa!r} x0={p.x0!r} y0={p.y0!r} method={method} "
        f"n={n_paths} seed={seed} step={params.step!r} escape={params.escape!r}",
        "ok",
        f"p_hat={estimate.p_hat:.6f} se={estimate.std_err:.6f} rejected={estimate.rejected}",
    )
    return estimate
