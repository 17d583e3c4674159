import math

import numpy as np
import pytest

from core.errors import DomainError
from core.formulas import (
    HalfPlanePoint,
    HittingWindow,
    arc_event_probability,
    conformal_map_phi,
    hitting_probability,
    left_passage_closed_form,
    left_passage_probability,
    supported_theta,
    theta_to_halfplane_point,
)

POINTS = [(0.0, 1.0), (1.0, 1.0), (-1.0, 2.0), (7.5, 0.3), (-9.0, 1.1), (0.01, 5.0)]


def test_kappa_four_example():
    assert left_passage_probability(4, HalfPlanePoint(1.0, 1.0)) == pytest.approx(0.75, abs=1e-12)


def test_kappa_eight_is_one_half():
    assert left_passage_probability(8, HalfPlanePoint(5.0, 1.0)) == 0.5


@pytest.mark.parametrize("kappa", [2.0, 8 / 3, 4.0])
@pytest.mark.parametrize("x0, y0", POINTS)
def test_closed_forms_agree_with_series(kappa, x0, y0):
    p = HalfPlanePoint(x0, y0)
    assert left_passage_probability(kappa, p) == pytest.approx(left_passage_closed_form(kappa, p), abs=1e-9)


def test_kappa_eight_thirds_closed_form():
    p = HalfPlanePoint(3.0, 4.0)
    assert left_passage_closed_form(8 / 3, p) == pytest.approx(0.5 + 3.0 / 10.0)


def test_closed_form_unavailable_for_other_kappa():
    with pytest.raises(DomainError):
        left_passage_closed_form(3.0, HalfPlanePoint(1.0, 1.0))


@pytest.mark.parametrize("kappa", [0.5, 3.0, 6.0, 7.9])
def test_reflection_and_scaling(kappa):
    for x0, y0 in POINTS:
        p = left_passage_probability(kappa, HalfPlanePoint(x0, y0))
        assert p + left_passage_probability(kappa, HalfPlanePoint(-x0, y0)) == pytest.approx(1.0, abs=1e-12)
        assert left_passage_probability(kappa, HalfPlanePoint(2.5 * x0, 2.5 * y0)) == pytest.approx(p, abs=1e-12)


@pytest.mark.parametrize("kappa", [-1.0, 0.0, 8.5])
def test_kappa_range(kappa):
    with pytest.raises(DomainError):
        left_passage_probability(kappa, HalfPlanePoint(1.0, 1.0))


def test_point_must_be_in_upper_half_plane():
    with pytest.raises(DomainError):
        HalfPlanePoint.checked(1.0, 0.0)
    with pytest.raises(DomainError):
        HalfPlanePoint.checked(math.nan, 1.0)


def test_arc_half_turn_and_quarter():
    assert arc_event_probability(math.pi) == pytest.approx(0.5, abs=1e-15)
    assert arc_event_probability(math.pi / 2) == pytest.approx(0.3837, abs=5e-4)


def test_arc_matches_kappa_six_passage():
    for theta in np.linspace(0.01, 2 * math.pi - 0.01, 300):
        pre = theta_to_halfplane_point(theta)
        assert arc_event_probability(theta) == pytest.approx(left_passage_probability(6, pre), abs=1e-12)


def test_arc_complement_and_monotonicity():
    thetas = np.linspace(1e-6, 2 * math.pi - 1e-6, 500)
    values = [arc_event_probability(t) for t in thetas]
    assert all(b > a for a, b in zip(values, values[1:]))
    for t, v in zip(thetas, values):
        assert v + arc_event_probability(2 * math.pi - t) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("theta", [0.0, -1.0, 2 * math.pi, 7.0])
def test_arc_theta_range(theta):
    with pytest.raises(DomainError):
        arc_event_probability(theta)


def test_supported_theta():
    assert supported_theta(1e-8)
    assert not supported_theta(1e-9)


def test_conformal_map_sends_preimage_to_centre():
    for theta in (0.3, math.pi / 2, 4.0):
        pre = theta_to_halfplane_point(theta)
        assert abs(conformal_map_phi(theta, complex(pre.x0, pre.y0))) < 1e-12
        assert conformal_map_phi(theta, 0j) == pytest.approx(1.0 + 0j, abs=1e-12)
        far = conformal_map_phi(theta, complex(1e9, 0.0))
        assert far == pytest.approx(complex(math.cos(theta), math.sin(theta)), abs=1e-8)


def test_conformal_map_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        conformal_map_phi(1.0, complex(0.0, -0.1))


def test_hitting_probability_symmetric_window():
    assert hitting_probability(3.0, HittingWindow(-1.0, 1.0, 0.0)) == pytest.approx(0.5, abs=1e-15)


def test_hitting_probability_unbounded_window_is_left_passage():
    for kappa in (2.0, 6.0):
        win = HittingWindow(-math.inf, math.inf, 0.8)
        expected = left_passage_probability(kappa, HalfPlanePoint(0.8, 1.0))
        assert hitting_probability(kappa, win) == pytest.approx(expected, abs=1e-14)


def test_hitting_window_order():
    with pytest.raises(DomainError):
        HittingWindow.checked(1.0, -1.0, 0.0)
