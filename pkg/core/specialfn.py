"""Gamma and the hypergeometric family F(1/2, b; 3/2; z), z <= 0.

Every closed-form probability in `core.formulas` reduces to these. Two
regimes:

* |z| <= 1: the Pfaff transform turns F into
  (1-z)^{-b} * sum (b)_k/(3/2)_k * y^k with y = z/(z-1) in [0, 1/2].
* |z| > 1: with z = -w^2, w*F(1/2, b; 3/2; -w^2) = int_0^w (1+t^2)^{-b} dt.
  This equals the full integral f_limit minus the tail
  1/2 * B(1/(1+w^2); b-1/2, 1/2), and that incomplete beta is again a
  series with ratio below 1/2.

The Pfaff series alone has ratio -> 1 as |z| grows, so it cannot stay
accurate for the -cot^2(theta/2) arguments near theta = 0.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from constants import SERIES_MAX_TERMS, SERIES_RTOL
from core.errors import DomainError
from utils.validation import require_kappa

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2 * math.pi)
_SQRT_PI = math.sqrt(math.pi)


class HypergeomParams(NamedTuple):
    """Second upper parameter `b` and argument `z` of F(1/2, b; 3/2; z)."""

    b: float
    z: float

    @classmethod
    def checked(cls, b: float, z: float) -> HypergeomParams:
        b, z = float(b), float(z)
        if not b > 0.5:
            raise DomainError(f"b must be > 1/2 (kappa < 8), got {b!r}", code="b_range")
        if not z <= 0:
            raise DomainError(f"z must be <= 0, got {z!r}", code="z_range")
        return cls(b, z)


_LOG_SQRT_2PI = math.log(_SQRT_2PI)
# Gamma(x) exceeds the largest double above this.
_GAMMA_MAX_ARG = 171.6
# Series partial sums are rescaled by this factor before they can overflow.
_RESCALE = 1e280
_LOG_RESCALE = math.log(_RESCALE)


def _lanczos_sum(x: float) -> tuple[float, float]:
    """(A_g(x), t) for the shifted argument x = z - 1."""
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    return acc, x + _LANCZOS_G + 0.5


def _lanczos(x: float) -> float:
    if x < 0.5:
        # Reflection keeps the small arguments (b - 1/2 near 0) accurate.
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    if x > _GAMMA_MAX_ARG:
        return math.inf
    acc, t = _lanczos_sum(x - 1.0)
    # t**(x - 1/2) is taken as a square so the power alone cannot overflow.
    half = t ** ((x - 0.5) / 2.0)
    return _SQRT_2PI * half * (half * math.exp(-t)) * acc


def _log_lanczos(x: float) -> float:
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - _log_lanczos(1.0 - x)
    acc, t = _lanczos_sum(x - 1.0)
    return _LOG_SQRT_2PI + (x - 0.5) * math.log(t) - t + math.log(acc)


def _check_gamma_arg(x: float) -> float:
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"gamma needs x > 0, got {x!r}", code="gamma_domain")
    return x


def gamma(x: float) -> float:
    """Gamma function for x > 0; inf once the value leaves the double range."""
    return _lanczos(_check_gamma_arg(x))


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0."""
    return _log_lanczos(_check_gamma_arg(x))


def _sum_series(ratio) -> tuple[float, float]:
    """
    Sum 1 + t_1 + t_2 + ... where t_{k+1} = t_k * ratio(k).

    Returns (mantissa, log_scale) with sum = mantissa * exp(log_scale). The
    scale stays 0 unless the partial sums pass 1e280.
    """
    total = 1.0
    term = 1.0
    log_scale = 0.0
    for k in range(SERIES_MAX_TERMS):
        term *= ratio(k)
        total += term
        if abs(term) < SERIES_RTOL * abs(total):
            return total, log_scale
        if abs(total) > _RESCALE:
            total /= _RESCALE
            term /= _RESCALE
            log_scale += _LOG_RESCALE
    raise DomainError(
        f"series did not converge within {SERIES_MAX_TERMS} terms", code="series_diverged"
    )


def _pfaff(b: float, z: float) -> float:
    y = z / (z - 1.0)
    series, log_scale = _sum_series(lambda k: (b + k) / (1.5 + k) * y)
    if log_scale == 0.0:
        return (1.0 - z) ** (-b) * series
    # Large b: the sum and (1-z)^{-b} are only representable together.
    return math.exp(log_scale + math.log(series) - b * math.log1p(-z))


def _limit_b(b: float) -> float:
    """int_0^inf (1+t^2)^{-b} dt."""
    if b <= _GAMMA_MAX_ARG:
        return _SQRT_PI * gamma(b - 0.5) / (2.0 * gamma(b))
    return 0.5 * _SQRT_PI * math.exp(log_gamma(b - 0.5) - log_gamma(b))


def _integral_tail_form(b: float, w: float) -> float:
    """int_0^w (1+t^2)^{-b} dt for w > 1, as limit minus tail."""
    p = b - 0.5
    x = 1.0 / (1.0 + w * w)
    series, _ = _sum_series(lambda k: (p + k) * (0.5 + k) / ((p + 1.0 + k) * (k + 1.0)) * x)
    tail = 0.5 * x**p / p * series
    return _limit_b(b) - tail


def _integral(b: float, w: float) -> float:
    """w * F(1/2, b; 3/2; -w^2) for w >= 0 (w may be +inf)."""
    if w == 0:
        return 0.0
    if math.isinf(w):
        return _limit_b(b)
    if w <= 1.0:
        return w * _pfaff(b, -w * w)
    return _integral_tail_form(b, w)


def hyp2f1_half(b: float, z: float) -> float:
    """F(1/2, b; 3/2; z) for b > 1/2 and z <= 0, any magnitude of z."""
    b, z = HypergeomParams.checked(b, z)
    if z == 0:
        return 1.0
    if z >= -1.0:
        return _pfaff(b, z)
    w = math.sqrt(-z)
    return _integral(b, w) / w


def schramm_f(kappa: float, w: float) -> float:
    """
    f(w) = w * F(1/2, 4/kappa; 3/2; -w^2), 0 < kappa < 8.

    Computed on |w| and signed afterwards, so f(-w) == -f(w) bit for bit.
    w = +/-inf returns +/-f_limit(kappa).
    """
    require_kappa(kappa)
    w = float(w)
    if math.isnan(w):
        raise DomainError("w must not be NaN", code="not_finite")
    return math.copysign(_integral(4.0 / kappa, abs(w)), w)


def f_limit(kappa: float) -> float:
    """lim_{w -> inf} f(w) = sqrt(pi) Gamma((8-kappa)/(2 kappa)) / (2 Gamma(4/kappa))."""
    require_kappa(kappa)
    return _limit_b(4.0 / kappa)
