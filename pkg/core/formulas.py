"""Closed-form probabilities.

* `left_passage_probability`: probability that chordal SLE_kappa in the
  upper half plane passes to the left of z0 = x0 + i y0.
* `arc_event_probability`: scaling-limit probability that critical
  percolation in the unit disk has a black cluster touching the arc
  {e^{is}: 0 <= s <= theta} which, together with the arc, cuts 0 off from
  the rest of the circle.
* `hitting_probability`: the w-diffusion's chance to reach b before a.
* `conformal_map_phi` / `theta_to_halfplane_point`: the Möbius map from the
  half plane to the disk sending 0 -> 1, inf -> e^{i theta}. The arc
  probability is the kappa = 6 left-passage probability at the preimage of
  the disk centre.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from constants import THETA_EPS, TWO_PI
from core.errors import DomainError
from core.specialfn import f_limit, gamma, hyp2f1_half, schramm_f
from utils.validation import require_finite, require_kappa

CLOSED_FORM_KAPPAS = (2.0, 8.0 / 3.0, 4.0, 8.0)

# Gamma(2/3) / (sqrt(pi) Gamma(1/6)); the kappa = 6 constant.
_ARC_CONSTANT = gamma(2.0 / 3.0) / (math.sqrt(math.pi) * gamma(1.0 / 6.0))


class HalfPlanePoint(NamedTuple):
    x0: float
    y0: float

    @classmethod
    def checked(cls, x0: float, y0: float) -> HalfPlanePoint:
        x0, y0 = float(x0), float(y0)
        require_finite("x0", x0)
        require_finite("y0", y0)
        if not y0 > 0:
            raise DomainError(f"y0 must be > 0 (upper half plane), got {y0!r}", code="y0_range")
        return cls(x0, y0)

    @property
    def w(self) -> float:
        return self.x0 / self.y0


class ArcAngle(NamedTuple):
    theta: float

    @classmethod
    def checked(cls, theta: float) -> ArcAngle:
        theta = float(theta)
        if not (0 < theta < TWO_PI):
            raise DomainError(f"theta must lie in (0, 2*pi), got {theta!r}", code="theta_range")
        return cls(theta)


class HittingWindow(NamedTuple):
    """Start point `w_hat` between the absorbing levels a < w_hat < b.

    Either level may be infinite; a = -inf, b = +inf is the passage problem.
    """

    a: float
    b: float
    w_hat: float

    @classmethod
    def checked(cls, a: float, b: float, w_hat: float) -> HittingWindow:
        a, b, w_hat = float(a), float(b), float(w_hat)
        require_finite("w_hat", w_hat)
        if not (a < w_hat < b):
            raise DomainError(
                f"need a < w_hat < b, got a={a!r}, w_hat={w_hat!r}, b={b!r}",
                code="window_order",
            )
        return cls(a, b, w_hat)


def _clamp01(p: float) -> float:
    return min(1.0, max(0.0, p))


def principal_arg(p: HalfPlanePoint) -> float:
    """arg z0 in (0, pi) for a point of the upper half plane."""
    return math.atan2(p.y0, p.x0)


def left_passage_probability(kappa: float, p: HalfPlanePoint) -> float:
    """P[SLE_kappa passes left of z0] = 1/2 + f(x0/y0) / (2 f_limit)."""
    require_kappa(kappa, allow_eight=True)
    p = HalfPlanePoint.checked(*p)
    if kappa == 8:
        return 0.5
    return _clamp01(0.5 + schramm_f(kappa, p.w) / (2.0 * f_limit(kappa)))


def left_passage_closed_form(kappa: float, p: HalfPlanePoint) -> float:
    """Elementary forms for kappa in {2, 8/3, 4, 8}.

    kappa = 8/3 is 1/2 + x0/(2|z0|): F(1/2, 3/2; 3/2; -w^2) = (1+w^2)^{-1/2}
    and the constant Gamma(3/2)/(sqrt(pi) Gamma(1)) is 1/2.
    """
    p = HalfPlanePoint.checked(*p)
    arg = principal_arg(p)
    modulus = math.hypot(p.x0, p.y0)
    if kappa == 2:
        return 1.0 + p.x0 * p.y0 / (math.pi * modulus**2) - arg / math.pi
    if math.isclose(kappa, 8.0 / 3.0, rel_tol=0, abs_tol=1e-12):
        return 0.5 + p.x0 / (2.0 * modulus)
    if kappa == 4:
        return 1.0 - arg / math.pi
    if kappa == 8:
        return 0.5
    raise DomainError(
        f"closed forms exist only for kappa in {{2, 8/3, 4, 8}}, got {kappa!r}",
        code="no_closed_form",
    )


def arc_event_probability(theta: float) -> float:
    """
    1/2 - Gamma(2/3)/(sqrt(pi) Gamma(1/6)) * F(1/2, 2/3; 3/2; -c^2) * c,
    c = cot(theta/2).

    Strictly increasing from 0 to 1 on (0, 2 pi). Supported down to
    |theta - {0, 2 pi}| >= 1e-8; the result is clamped to [0, 1].
    """
    (theta,) = ArcAngle.checked(theta)
    c = 1.0 / math.tan(theta / 2.0)
    # c * F(-c^2) is odd in c; evaluate on |c| to keep the complement exact.
    value = math.copysign(abs(c) * hyp2f1_half(2.0 / 3.0, -c * c), c)
    return _clamp01(0.5 - _ARC_CONSTANT * value)


def hitting_probability(kappa: float, win: HittingWindow) -> float:
    """h(w_hat) = (f(w_hat) - f(a)) / (f(b) - f(a))."""
    require_kappa(kappa)
    win = HittingWindow.checked(*win)
    fa = schramm_f(kappa, win.a)
    fb = schramm_f(kappa, win.b)
    return _clamp01((schramm_f(kappa, win.w_hat) - fa) / (fb - fa))


def conformal_map_phi(theta: float, z: complex) -> complex:
    """phi(z) = e^{i theta} (z + cot(theta/2) - i) / (z + cot(theta/2) + i)."""
    (theta,) = ArcAngle.checked(theta)
    z = complex(z)
    if z.imag < 0:
        raise DomainError(f"z must satisfy Im z >= 0, got {z!r}", code="lower_half_plane")
    c = 1.0 / math.tan(theta / 2.0)
    rotation = complex(math.cos(theta), math.sin(theta))
    return rotation * (z + c - 1j) / (z + c + 1j)


def theta_to_halfplane_point(theta: float) -> HalfPlanePoint:
    """The preimage of 0 under phi: x0 = -cot(theta/2), y0 = 1."""
    (theta,) = ArcAngle.checked(theta)
    return HalfPlanePoint(-1.0 / math.tan(theta / 2.0), 1.0)


def supported_theta(theta: float) -> bool:
    return THETA_EPS <= theta <= TWO_PI - THETA_EPS
