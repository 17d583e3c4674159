import math
from collections import Counter

import numpy as np
import pytest

from constants import TWO_PI
from core.errors import DegenerateGeometryError, DomainError
from core.percolation import build_disk_lattice
from core.percolation.lattice import default_margin


def test_micro_lattice_counts(micro_lattice):
    assert micro_lattice.n_sites == 19
    assert int(micro_lattice.in_disk.sum()) == 7
    assert micro_lattice.origin_site == micro_lattice.site_of(0, 0)
    assert np.flatnonzero(micro_lattice.inside_open).tolist() == [micro_lattice.origin_site]
    ring = micro_lattice.neighbors[micro_lattice.origin_site]
    assert (ring >= 0).all()
    assert micro_lattice.in_disk[ring].all()


def test_site_count_grows_like_area(small_lattice):
    # hexagon area is (sqrt(3)/2) delta^2
    radius = 1.0 + small_lattice.margin
    expected = math.pi * radius**2 / (math.sqrt(3) / 2 * small_lattice.delta**2)
    assert small_lattice.n_sites == pytest.approx(expected, rel=0.05)
    disk_expected = math.pi / (math.sqrt(3) / 2 * small_lattice.delta**2)
    assert int(small_lattice.in_disk.sum()) == pytest.approx(disk_expected, rel=0.08)


def test_in_disk_sites_have_all_neighbours(small_lattice):
    nb = small_lattice.neighbors[small_lattice.in_disk]
    assert (nb >= 0).all()


def test_neighbour_relation_is_symmetric(small_lattice):
    for k in range(6):
        nb = small_lattice.neighbors[:, k]
        has = np.flatnonzero(nb >= 0)
        back = small_lattice.neighbors[nb[has], (k + 3) % 6]
        assert np.array_equal(back, has)


@pytest.mark.parametrize("lattice_name", ["micro_lattice", "tiny_lattice", "small_lattice"])
def test_boundary_intervals_cover_the_circle(request, lattice_name):
    lattice = request.getfixturevalue(lattice_name)
    pieces = [p for ps in lattice.intervals.values() for p in ps]
    assert sum(p.end - p.start for p in pieces) == pytest.approx(TWO_PI, abs=1e-9)
    assert all(0.0 <= p.start < TWO_PI and p.end > p.start for p in pieces)
    # each crossing ends one interval and starts the next
    starts = Counter(p.start_key for p in pieces)
    ends = Counter(p.end_key for p in pieces)
    assert starts == ends
    assert max(starts.values()) == 1


def test_boundary_sites_touch_but_are_not_inside(small_lattice):
    sites = small_lattice.boundary_sites
    assert small_lattice.in_disk[sites].all()
    assert not small_lattice.inside_open[sites].any()


def test_locate_finds_the_containing_hexagon(small_lattice):
    rng = np.random.default_rng(0)
    for site in rng.choice(np.flatnonzero(small_lattice.in_disk), 25, replace=False):
        cx, cy = small_lattice.centers[site]
        assert small_lattice.locate(cx, cy) == site
        assert small_lattice.clearance(site, cx, cy) == pytest.approx(small_lattice.delta / 2)
    assert small_lattice.locate(10.0, 10.0) == -1


def test_arc_incidence(small_lattice):
    inc = small_lattice.arc_incidence(math.pi)
    boundary = np.zeros(small_lattice.n_sites, dtype=bool)
    boundary[small_lattice.boundary_sites] = True
    assert np.array_equal(inc.touches_arc | inc.touches_rest, boundary)
    top = small_lattice.locate(0.0, 1.0)
    bottom = small_lattice.locate(0.0, -1.0)
    assert inc.touches_arc[top] and not inc.touches_rest[top]
    assert inc.touches_rest[bottom] and not inc.touches_arc[bottom]
    # both endpoint hexagons sit on both sides
    for x, y in ((1.0, 0.0), (-1.0, 0.0)):
        site = small_lattice.locate(x, y)
        assert inc.touches_arc[site] and inc.touches_rest[site]
    assert small_lattice.arc_incidence(math.pi) is inc


def test_rotated_arc_incidence(small_lattice):
    inc = small_lattice.arc_incidence(math.pi / 2, math.pi)
    left = small_lattice.locate(math.cos(1.2 * math.pi), math.sin(1.2 * math.pi))
    right = small_lattice.locate(math.cos(0.1 * math.pi), math.sin(0.1 * math.pi))
    assert inc.touches_arc[left]
    assert not inc.touches_arc[right]


@pytest.mark.parametrize("theta", [0.0, TWO_PI, -1.0])
def test_arc_incidence_theta_range(micro_lattice, theta):
    with pytest.raises(DomainError):
        micro_lattice.arc_incidence(theta)


def test_disk_edges_are_clipped_to_the_disk(tiny_lattice):
    for edge in np.flatnonzero(tiny_lattice.disk_edge)[:200]:
        seg = tiny_lattice.edge_segment(int(edge))
        for x, y in (seg.a, seg.b):
            assert math.hypot(x, y) <= 1.0 + 1e-12
    outside = np.flatnonzero(~tiny_lattice.disk_edge)[0]
    with pytest.raises(DomainError):
        tiny_lattice.edge_segment(int(outside))


def test_degenerate_offset_is_rejected():
    delta = 0.25
    with pytest.raises(DegenerateGeometryError):
        build_disk_lattice(delta, offset=(delta / 2.0, 0.0))


@pytest.mark.parametrize(
    "delta, margin",
    [(0.0, None), (-0.1, None), (2.0, None), (math.nan, None), (0.5, -0.1), (0.5, math.inf)],
)
def test_domain(delta, margin):
    with pytest.raises(DomainError):
        build_disk_lattice(delta, margin)


def test_default_margin():
    assert default_margin(0.001) == 0.1
    assert default_margin(0.05) == pytest.approx(0.5)
