"""Cooperative cancellation for long-running estimates.

The Monte Carlo harness calls `raise_if_cancelled()` between chunks, and
`install_sigint` connects Ctrl-C to `cancel()`. A chunk that is already
running is allowed to finish. The harness then raises `RunCancelled` before
the next chunk, so a half-aggregated estimate never reaches the output.
"""

from __future__ import annotations

import signal

from core.errors import RunCancelled


class CancellationToken:
    __slots__ = ("_cancelled", "_reason")

    def __init__(self) -> None:
        self._cancelled = False
        self._reason = ""

    @property
    def is_cancelled(self) -> bool:
        return self._cancelled

    def cancel(self, reason: str = "cancelled") -> None:
        self._cancelled = True
        self._reason = reason

    def raise_if_cancelled(self) -> None:
        if self._cancelled:
            raise RunCancelled(self._reason, code="cancelled")

    def reset(self) -> None:
        """Clear the flag so the token can be reused for a new run."""
        self._cancelled = False
        self._reason = ""


def install_sigint(token: CancellationToken):
    """First Ctrl-C cancels cooperatively; a second one interrupts outright.

    Returns the handler it replaced.
    """

    def _handler(signum, frame):
        if token.is_cancelled:
            signal.signal(signal.SIGINT, signal.default_int_handler)
            raise KeyboardInterrupt
        token.cancel("interrupted by SIGINT")

    return signal.signal(signal.SIGINT, _handler)
