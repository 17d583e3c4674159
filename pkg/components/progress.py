"""Live progress line for long estimates.

`ProgressLine` rewrites a single stderr line with "label · x / y · n
rejected" while the harness reports finished chunks. Stdout stays clean
for the result table. When stderr is not a terminal the line is only
written on `complete()`.
"""

from __future__ import annotations

import sys
from typing import TextIO


class ProgressLine:
    """A carriage-return progress counter driven by the harness callback."""

    def __init__(self, label: str, *, stream: TextIO | None = None, enabled: bool = True):
        self._label = label
        self._stream = stream if stream is not None else sys.stderr
        self._enabled = enabled
        self._live = enabled and self._stream.isatty()
        self._text = ""

    def _render(self, done: int, total: int | None, rejected: int) -> str:
        parts = [self._label]
        parts.append(f"{done} / {total}" if total is not None else f"{done} done")
        if rejected:
            parts.append(f"{rejected} rejected")
        return "  ·  ".join(parts)

    def set_progress(self, done: int, total: int | None = None, rejected: int = 0) -> None:
        self._text = self._render(done, total, rejected)
        if self._live:
            self._stream.write("\r" + self._text)
            self._stream.flush()

    # The harness calls progress(done, total, rejected).
    __call__ = set_progress

    def complete(self, status: str = "done") -> None:
        if not self._enabled:
            return
        prefix = "\r" if self._live else ""
        self._stream.write(f"{prefix}{self._text or self._label}  ·  {status}\n")
        self._stream.flush()
