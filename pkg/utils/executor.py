"""Thread pools for running Monte Carlo chunks in parallel.

The harness submits fixed-size chunks and collects them in submission
order, so the worker count only changes wall time, never the numbers.
numpy and the numba cluster kernels do their heavy lifting outside the
interpreter lock, which is what makes threads worthwhile here.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from constants import ENV_WORKERS
from utils import prefs


def resolve_workers(requested: int | None = None) -> int:
    """Flag, then $SLEPERC_WORKERS, then prefs.json, then the CPU count."""
    if requested is not None:
        value = requested
    elif os.environ.get(ENV_WORKERS):
        try:
            value = int(os.environ[ENV_WORKERS])
        except ValueError:
            value = 0
    else:
        value = prefs.get_pref("workers") or 0
    if not isinstance(value, int) or value < 1:
        value = os.cpu_count() or 1
    return value


def make_executor(workers: int | None = None) -> ThreadPoolExecutor:
    return ThreadPoolExecutor(
        max_workers=resolve_workers(workers), thread_name_prefix="sleperc"
    )
