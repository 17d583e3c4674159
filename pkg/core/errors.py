"""Exception hierarchy shared by the library and the command driver.

Every error carries a short machine `code` and the process `exit_status`
the driver should use, so `main.py` maps failures to exit codes without a
lookup table of exception types.
"""

from __future__ import annotations

from constants import EXIT_BUDGET, EXIT_CANCELLED, EXIT_DOMAIN, EXIT_VERIFY_FAILED


class SlepercError(Exception):
    """Base class. `code` is a stable tag callers can branch on."""

    exit_status = EXIT_VERIFY_FAILED

    def __init__(self, message: str = "", *, code: str = ""):
        super().__init__(message)
        self.code = code or type(self).__name__


class DomainError(SlepercError, ValueError):
    """An argument is outside its documented bound; the message names the bound."""

    exit_status = EXIT_DOMAIN


class DegenerateGeometryError(DomainError):
    """0, 1 or e^{i theta} sits on (or numerically at) a hexagon boundary."""


class BudgetExceededError(SlepercError):
    """Too many truncated paths or redrawn samples for the estimate to stand."""

    exit_status = EXIT_BUDGET

    def __init__(self, message: str = "", *, code: str = "", rejected: int = 0, n: int = 0):
        super().__init__(message, code=code)
        self.rejected = rejected
        self.n = n


class MarginExhaustedError(SlepercError):
    """The circuit surrounding the last nested cluster leaves the lattice."""


class InterfaceTraceError(SlepercError):
    """The exploration interface chain broke; indicates a geometry defect."""


class RunCancelled(SlepercError):
    exit_status = EXIT_CANCELLED
