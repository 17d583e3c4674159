"""Parsing and bound checks for command-line numbers.

Angles are typed the way people write them by hand: ``pi/2``, ``3pi/2``,
``3*pi/4``, ``-pi`` or a plain float. `parse_angle` is the single
definition of that grammar. The ``require_*`` helpers are the gates every
library entry point uses. They raise `DomainError` with the violated bound
in the message, and the driver maps that to exit status 2.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from core.errors import DomainError

_ANGLE_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi"
    r"(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?\s*$",
    re.IGNORECASE,
)


def parse_angle(text: str) -> float:
    """
    Parse ``"pi/2"``, ``"3pi/2"``, ``"2*pi/3"`` or a float literal.

    A missing numerator means 1 and a missing denominator means 1, so
    ``"pi"`` is π. Anything else has to be a valid float.
    """
    raw = (text or "").strip()
    match = _ANGLE_RE.match(raw)
    if match is None:
        try:
            return float(raw)
        except ValueError:
            raise DomainError(f"cannot parse angle {text!r}", code="bad_angle") from None
    num = float(match.group("num") or 1.0)
    den = float(match.group("den") or 1.0)
    if den == 0:
        raise DomainError(f"zero denominator in angle {text!r}", code="bad_angle")
    value = num * math.pi / den
    return -value if match.group("sign") == "-" else value


def parse_number(text: str) -> float:
    """A float literal or an exact ratio such as ``8/3``, rounded once."""
    raw = (text or "").strip()
    try:
        return float(raw)
    except ValueError:
        pass
    try:
        return float(Fraction(raw))
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"cannot parse number {text!r}", code="bad_number") from None


def parse_float_list(text: str, *, angle: bool = False) -> list[float]:
    """Split a comma-separated list; angle mode accepts pi expressions."""
    parts = [p for p in (text or "").split(",") if p.strip()]
    if not parts:
        raise DomainError("empty value list", code="empty_list")
    if angle:
        return [parse_angle(p) for p in parts]
    return [parse_number(p) for p in parts]


def require_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}", code="not_finite")
    return value


def require_kappa(kappa: float, *, allow_eight: bool = False) -> float:
    """0 < kappa < 8, or 0 < kappa <= 8 when the kappa = 8 constant applies."""
    if allow_eight and kappa == 8:
        return kappa
    bound = "(0, 8]" if allow_eight else "(0, 8)"
    if not (0 < kappa < 8):
        raise DomainError(f"kappa must lie in {bound}, got {kappa!r}", code="kappa_range")
    return kappa


def require_positive(name: str, value: float) -> float:
    if not value > 0:
        raise DomainError(f"{name} must be > 0, got {value!r}", code="not_positive")
    return value


def require_at_least(name: str, value: float, minimum: float) -> float:
    if not value >= minimum:
        raise DomainError(f"{name} must be >= {minimum:g}, got {value!r}", code="too_small")
    return value
