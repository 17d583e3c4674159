"""One-line verify results: a fixed-width state tag, the check name, details."""

from __future__ import annotations

# state -> tag
_STATUS = {
    "pass": "PASS",
    "fail": "FAIL",
    "skip": "SKIP",
    "error": "ERROR",
}


def status_row(state: str, label: str, *, detail: str | None = None) -> str:
    tag = _STATUS.get(state, state.upper())
    text = label if not detail else f"{label}: {detail}"
    return f"[{tag:<5}] {text}"
