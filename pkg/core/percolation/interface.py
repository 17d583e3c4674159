"""Exploration-interface tracer: a second, independent detector for event A.

Hexagons outside the disk are forced black along the arc and white along
the rest of the circle. Let R be the black disk clusters touching the arc
and F the sites outside R that connect to the rest. The interface beta
separates R plus the arc from F plus the rest, running from 1 to
e^{i theta}. It is assembled from three kinds of pieces:

* circle pieces of F sites inside the arc, walked counterclockwise;
* circle pieces of R sites on the rest, walked clockwise;
* shared disk edges between an F site and an R site, walked with F on the
  left.

Pieces are chained by endpoint key. Closing beta with the clockwise arc
from e^{i theta} back to 1 gives a loop, and the event holds exactly when
that loop winds once clockwise around the origin.
"""

from __future__ import annotations

import math

import numpy as np

from constants import TWO_PI
from core.errors import InterfaceTraceError
from core.percolation.clusters import disk_clusters
from core.percolation.coloring import Coloring
from core.percolation.events import arc_region, free_clusters
from core.percolation.lattice import DiskLattice, PointKey

_ONE = "one"
_ETHETA = "etheta"


def _wrap(angle: float) -> float:
    return (angle + math.pi) % TWO_PI - math.pi


def _split(start: float, end: float, theta: float):
    """Cut [start, end] at 1 and e^{i theta}; yields (a, b, a_cut, b_cut)."""
    cuts = [
        (angle, key)
        for angle, key in ((0.0, _ONE), (theta, _ETHETA), (TWO_PI, _ONE), (TWO_PI + theta, _ETHETA))
        if start < angle < end
    ]
    bounds = [(start, None), *cuts, (end, None)]
    for (a, a_cut), (b, b_cut) in zip(bounds[:-1], bounds[1:]):
        yield a, b, a_cut, b_cut


def _arc_pieces(lattice: DiskLattice, sites: np.ndarray, theta: float, on_arc: bool):
    """(key_from, key_to, sweep) for every boundary piece of `sites` on one side."""
    for site in sites.tolist():
        for piece in lattice.intervals.get(site, ()):
            for a, b, a_cut, b_cut in _split(piece.start, piece.end, theta):
                if ((0.5 * (a + b)) % TWO_PI <= theta) != on_arc:
                    continue
                a_key = a_cut or piece.start_key
                b_key = b_cut or piece.end_key
                if on_arc:
                    yield a_key, b_key, b - a
                else:
                    yield b_key, a_key, a - b


def _edge_pieces(lattice: DiskLattice, f_mask: np.ndarray, r_mask: np.ndarray):
    u, v = lattice.edge_u, lattice.edge_v
    mixed = lattice.disk_edge & ((f_mask[u] & r_mask[v]) | (r_mask[u] & f_mask[v]))
    for edge in np.flatnonzero(mixed).tolist():
        seg = lattice.edge_segment(edge)
        f_site = u[edge] if f_mask[u[edge]] else v[edge]
        cx, cy = lattice.centers[f_site]
        (ax, ay), (bx, by) = seg.a, seg.b
        cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        sweep = _wrap(math.atan2(by, bx) - math.atan2(ay, ax))
        if cross > 0:
            yield seg.a_key, seg.b_key, sweep
        else:
            yield seg.b_key, seg.a_key, -sweep


def trace_interface_beta(lattice: DiskLattice, coloring: Coloring, theta: float) -> int:
    """
    Clockwise winding number of beta closed by the arc, for the arc [0, theta].

    Returns 1 when the event holds and 0 otherwise. Raises
    InterfaceTraceError if the pieces do not chain from 1 to e^{i theta}.
    """
    incidence = lattice.arc_incidence(theta)
    region = arc_region(lattice, coloring, incidence, disk_clusters(lattice, coloring))
    free = lattice.in_disk & ~region
    seeds = np.flatnonzero(free & incidence.touches_rest)
    if len(seeds):
        f_mask = free_clusters(lattice, region).union_of(seeds) & free
    else:
        f_mask = np.zeros(lattice.n_sites, dtype=bool)

    succ: dict[PointKey, tuple[PointKey, float]] = {}
    pieces = [
        *_arc_pieces(lattice, np.flatnonzero(f_mask), theta, on_arc=True),
        *_arc_pieces(lattice, np.flatnonzero(region), theta, on_arc=False),
        *_edge_pieces(lattice, f_mask, region),
    ]
    for start, end, sweep in pieces:
        if start in succ:
            raise InterfaceTraceError(f"two interface pieces leave {start!r}", code="branch")
        succ[start] = (end, sweep)

    total = 0.0
    key: PointKey = _ONE
    for _ in range(len(succ) + 1):
        if key == _ETHETA:
            break
        if key not in succ:
            raise InterfaceTraceError(f"interface stops at {key!r}", code="dead_end")
        key, sweep = succ[key]
        total += sweep
    else:
        raise InterfaceTraceError("interface does not reach e^{i theta}", code="loop")
    total -= theta
    return int(-round(total / TWO_PI))
