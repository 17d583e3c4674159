"""Shared Monte Carlo harness.

Sample `i` of a run keyed by `seed` always draws from
`sample_stream(seed, i)`, which is a Philox counter-based generator keyed by
the pair. Samples are grouped into fixed-size chunks that run on a thread
pool, and the values are gathered back in index order before any reduction.
Worker count and scheduling therefore never change a reported digit.

Trials come in two shapes:

* per-sample: `trial(index, rng)` returns a float, a tuple of floats,
  `None` (rejected) or a `TrialOutcome` carrying a redraw count;
* batched: `batch_trial(indices, seed)` returns an `(len(indices), k)`
  array (NaN rows = rejected) or a `BatchResult`. The diffusion engine
  uses this form to vectorize paths.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from typing import NamedTuple

import numpy as np
from scipy.stats import norm

from constants import DEFAULT_CHUNK_SIZE, DEFAULT_CONFIDENCE, MIN_TRIALS
from core.errors import BudgetExceededError, DomainError
from utils.cancellation import CancellationToken
from utils.executor import make_executor

ProgressCallback = Callable[[int, int, int], None]

_U64 = 1 << 64


class McEstimate(NamedTuple):
    p_hat: float
    n: int
    std_err: float
    ci_low: float
    ci_high: float
    seed: int
    rejected: int = 0
    kind: str = "bernoulli"
    # Worst-case systematic error the estimator knowingly carries (0 = none).
    bias_bound: float = 0.0


class TrialOutcome(NamedTuple):
    values: tuple[float, ...] | None
    redraws: int = 0


class BatchResult(NamedTuple):
    values: np.ndarray
    redraws: int = 0


class TrialTable(NamedTuple):
    values: np.ndarray  # (n, k); NaN rows are rejected samples
    redraws: int
    seed: int

    @property
    def rejected_rows(self) -> int:
        return int(np.isnan(self.values).any(axis=1).sum())


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for sample `index` of the run keyed by `seed`."""
    if not (0 <= seed < _U64 and 0 <= index < _U64):
        raise DomainError(
            f"seed and index must be in [0, 2**64), got seed={seed!r}, index={index!r}",
            code="seed_range",
        )
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(index)))


def confidence_z(confidence: float = DEFAULT_CONFIDENCE) -> float:
    if not (0 < confidence < 1):
        raise DomainError(f"confidence must lie in (0, 1), got {confidence!r}", code="confidence")
    return float(norm.ppf(0.5 + confidence / 2.0))


def wilson_interval(
    successes: int, trials: int, confidence: float = DEFAULT_CONFIDENCE
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if trials == 0:
        return (0.0, 1.0)
    z = confidence_z(confidence)
    p_hat = successes / trials
    denominator = 1 + z**2 / trials
    center = (p_hat + z**2 / (2 * trials)) / denominator
    margin = (z / denominator) * math.sqrt(
        p_hat * (1 - p_hat) / trials + z**2 / (4 * trials**2)
    )
    return (max(0.0, center - margin), min(1.0, center + margin))


def _chunks(n: int, chunk_size: int) -> list[tuple[int, int]]:
    return [(start, min(start + chunk_size, n)) for start in range(0, n, chunk_size)]


def run_batched_trials(
    batch_trial: Callable[[np.ndarray, int], np.ndarray | BatchResult],
    n: int,
    seed: int,
    *,
    workers: int | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    cancel: CancellationToken | None = None,
    progress: ProgressCallback | None = None,
) -> TrialTable:
    """Run `batch_trial` over indices 0..n-1 in fixed chunks; gather in order."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}", code="n_range")
    sample_stream(seed, 0)  # validates the seed before any work starts

    def _run(bounds: tuple[int, int]) -> BatchResult | None:
        if cancel is not None and cancel.is_cancelled:
            return None
        indices = np.arange(bounds[0], bounds[1], dtype=np.int64)
        result = batch_trial(indices, seed)
        if not isinstance(result, BatchResult):
            result = BatchResult(np.asarray(result, dtype=float))
        values = result.values.reshape(len(indices), -1)
        return BatchResult(values, result.redraws)

    blocks: list[np.ndarray] = []
    redraws = 0
    done = 0
    rejected = 0
    with make_executor(workers) as pool:
        for result in pool.map(_run, _chunks(n, chunk_size)):
            if result is None:
                break
            blocks.append(result.values)
            redraws += result.redraws
            done += len(result.values)
            rejected += int(np.isnan(result.values).any(axis=1).sum())
            if progress is not None:
                progress(done, n, rejected + redraws)
    if cancel is not None:
        cancel.raise_if_cancelled()
    widths = {b.shape[1] for b in blocks}
    if len(widths) != 1:
        raise ValueError(f"trials returned inconsistent widths {sorted(widths)}")
    return TrialTable(np.concatenate(blocks, axis=0), redraws, seed)


def _normalize(outcome) -> tuple[tuple[float, ...] | None, int]:
    if isinstance(outcome, TrialOutcome):
        values, redraws = outcome.values, outcome.redraws
    else:
        values, redraws = outcome, 0
    if values is None:
        return None, redraws
    if isinstance(values, (Sequence, np.ndarray)):
        return tuple(float(v) for v in values), redraws
    return (float(values),), redraws


def run_trials(
    trial: Callable[[int, np.random.Generator], object],
    n: int,
    seed: int,
    **kwargs,
) -> TrialTable:
    """Per-sample form of `run_batched_trials`; each trial gets its own stream."""

    def _batch(indices: np.ndarray, batch_seed: int) -> BatchResult:
        rows: list[tuple[float, ...] | None] = []
        redraws = 0
        for index in indices:
            values, extra = _normalize(trial(int(index), sample_stream(batch_seed, int(index))))
            rows.append(values)
            redraws += extra
        width = next((len(r) for r in rows if r is not None), 1)
        out = np.full((len(rows), width), np.nan)
        for i, row in enumerate(rows):
            if row is not None:
                if len(row) != width:
                    raise ValueError(f"trial returned {len(row)} values, expected {width}")
                out[i] = row
        return BatchResult(out, redraws)

    return run_batched_trials(_batch, n, seed, **kwargs)


def summarize(
    values: np.ndarray,
    *,
    seed: int,
    redraws: int = 0,
    confidence: float = DEFAULT_CONFIDENCE,
    bias_bound: float = 0.0,
) -> McEstimate:
    """
    Reduce one column of trial values to an estimate.

    {0, 1}-valued columns get the Wilson interval. Anything else, such as
    the {0, 1/2, 1} statistic, gets mean +/- z * sd / sqrt(n) with the
    sample standard deviation. NaN entries count as rejected.
    """
    values = np.asarray(values, dtype=float).ravel()
    mask = ~np.isnan(values)
    accepted = values[mask]
    rejected = int(values.size - accepted.size) + int(redraws)
    n = int(accepted.size)
    if n == 0:
        raise BudgetExceededError(
            "every sample was rejected", code="all_rejected", rejected=rejected, n=values.size
        )
    if np.all((accepted == 0.0) | (accepted == 1.0)):
        successes = int(np.count_nonzero(accepted))
        p_hat = successes / n
        std_err = math.sqrt(p_hat * (1.0 - p_hat) / n)
        low, high = wilson_interval(successes, n, confidence)
        kind = "bernoulli"
    else:
        p_hat = float(accepted.mean())
        sd = float(accepted.std(ddof=1)) if n > 1 else 0.0
        std_err = sd / math.sqrt(n)
        half = confidence_z(confidence) * std_err
        low, high = p_hat - half, p_hat + half
        kind = "mean"
    # The interval always brackets the point estimate, even after rounding.
    low = max(0.0, min(low, p_hat))
    high = min(1.0, max(high, p_hat))
    return McEstimate(p_hat, n, std_err, low, high, int(seed), rejected, kind, bias_bound)


def run_bernoulli_estimator(
    trial: Callable[[int, np.random.Generator], object],
    n: int,
    seed: int,
    *,
    confidence: float = DEFAULT_CONFIDENCE,
    **kwargs,
) -> McEstimate:
    """Estimate E[trial] for a {0,1}- or {0,1/2,1}-valued trial."""
    if n < MIN_TRIALS:
        raise DomainError(f"n must be >= {MIN_TRIALS}, got {n!r}", code="n_range")
    table = run_trials(trial, n, seed, **kwargs)
    return summarize(table.values[:, 0], seed=seed, redraws=table.redraws, confidence=confidence)


def combined_std_err(*estimates: McEstimate) -> float:
    return math.sqrt(sum(e.std_err**2 for e in estimates))


def z_score(estimate: McEstimate, reference: float) -> float:
    """(p_hat - reference) / std_err; 0 or +/-inf when the error is zero."""
    diff = estimate.p_hat - reference
    if estimate.std_err == 0:
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return diff / estimate.std_err
