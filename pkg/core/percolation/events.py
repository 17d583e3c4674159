"""Detectors for the arc-surrounding event and the nested-cluster statistic.

Conventions on the discrete lattice:

* a site touches the arc when its boundary interval meets the closed arc
  [arc_start, arc_start + theta], and touches the rest when it meets the
  open remainder of the circle;
* clusters are cut down to the disk with disk edges (shared edges that meet
  the closed disk);
* when the origin's own hexagon belongs to an arc-touching black cluster,
  the event holds.

The event and the statistic are linked per coloring by

    event_a == (X == 1) or (X == 1/2 and C_m is black)

which `ArcEventOutcome.identity_holds` checks.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from core.errors import MarginExhaustedError
from core.percolation.clusters import (
    ClusterSet,
    disk_clusters,
    region_clusters,
    same_color_clusters,
)
from core.percolation.coloring import Coloring
from core.percolation.lattice import ArcIncidence, DiskLattice


class ArcEventOutcome(NamedTuple):
    event_a: bool
    x_stat: float
    cm_color: bool  # True = black
    m: int

    @property
    def identity_holds(self) -> bool:
        return self.event_a == (self.x_stat == 1.0 or (self.x_stat == 0.5 and self.cm_color))


class NestedChain(NamedTuple):
    """The theta-independent part of X.

    `m` is the nesting depth, `cm_color` the color of C_m and `inner` the
    mask of C'_m (the disk component of C_m around the origin).
    """

    m: int
    cm_color: bool
    anchor: int
    inner: np.ndarray


# ----------------------------------------------------------------------
# Event A
# ----------------------------------------------------------------------


def arc_region(
    lattice: DiskLattice,
    coloring: Coloring,
    incidence: ArcIncidence,
    disk: ClusterSet | None = None,
) -> np.ndarray:
    """Mask of R: the black disk clusters that touch the arc."""
    disk = disk if disk is not None else disk_clusters(lattice, coloring)
    black = coloring.bits & lattice.in_disk
    seeds = np.flatnonzero(black & incidence.touches_arc)
    if len(seeds) == 0:
        return np.zeros(lattice.n_sites, dtype=bool)
    return disk.union_of(seeds) & black


def free_clusters(lattice: DiskLattice, region: np.ndarray) -> ClusterSet:
    """Disk components of the in-disk sites outside R."""
    return region_clusters(lattice, lattice.in_disk & ~region)


def detect_event_a(
    lattice: DiskLattice,
    coloring: Coloring,
    theta: float,
    *,
    arc_start: float = 0.0,
    disk: ClusterSet | None = None,
) -> bool:
    """
    True iff R together with the arc cuts the origin off from the rest of
    the circle.

    Floods from the origin's hexagon through in-disk sites outside R; the
    event fails as soon as the flood holds a site touching the rest.
    """
    incidence = lattice.arc_incidence(theta, arc_start)
    region = arc_region(lattice, coloring, incidence, disk)
    origin = lattice.origin_site
    if region[origin]:
        return True
    flood = free_clusters(lattice, region).members(origin)
    return not bool((flood & incidence.touches_rest).any())


# ----------------------------------------------------------------------
# Nested clusters and X
# ----------------------------------------------------------------------


def _contained(lattice: DiskLattice, full: ClusterSet) -> np.ndarray:
    """Per site: does its whole cluster lie inside the open disk?"""
    outside = np.bincount(
        full.labels, weights=(~lattice.inside_open).astype(float), minlength=lattice.n_sites
    )
    return outside[full.labels] == 0


def _nest_depth(lattice: DiskLattice, full: ClusterSet, fill: np.ndarray, target: int) -> int:
    """Number of clusters crossed walking out from the origin's cluster to `target`."""
    labels = full.labels
    allowed = fill | (labels == target)
    visited = {int(labels[lattice.origin_site])}
    frontier = np.array(sorted(visited))
    depth = 1
    while target not in visited:
        sites = np.flatnonzero(np.isin(labels, frontier) & allowed)
        nb = lattice.neighbors[sites].ravel()
        nb = nb[nb >= 0]
        nb = nb[allowed[nb]]
        fresh = np.setdiff1d(np.unique(labels[nb]), frontier)
        fresh = np.array([c for c in fresh.tolist() if c not in visited], dtype=np.int64)
        if len(fresh) == 0:
            raise MarginExhaustedError(
                "surrounding cluster not reachable from the origin", code="chain_broken"
            )
        visited.update(fresh.tolist())
        frontier = fresh
        depth += 1
    return depth


def nested_chain(
    lattice: DiskLattice,
    coloring: Coloring,
    *,
    full: ClusterSet | None = None,
    disk: ClusterSet | None = None,
) -> NestedChain:
    """
    Walk C_1, C_2, ... outwards until a cluster leaves the open disk.

    C_1 is the origin's cluster. While it stays inside the disk, everything
    it encloses and every cluster nested around it up to C_{m-1} is inside
    too. Flooding from the origin over sites of contained clusters therefore
    fills exactly that region, and its outside neighbours form the circuit of
    C_m around C_{m-1}. They must all share one cluster; otherwise the margin
    was too thin and MarginExhaustedError is raised.
    """
    full = full if full is not None else same_color_clusters(lattice, coloring)
    disk = disk if disk is not None else disk_clusters(lattice, coloring)
    origin = lattice.origin_site
    contained = _contained(lattice, full)
    if not contained[origin]:
        return NestedChain(1, bool(coloring.bits[origin]), origin, disk.members(origin))

    fill = region_clusters(lattice, contained, disk_only=False).members(origin)
    nb = lattice.neighbors[fill].ravel()
    nb = nb[nb >= 0]
    circuit = np.unique(nb[~fill[nb]])
    roots = np.unique(full.labels[circuit])
    if len(roots) != 1:
        raise MarginExhaustedError(
            f"circuit around the contained clusters splits into {len(roots)} clusters",
            code="margin_exhausted",
        )
    anchor = int(circuit[0])
    m = _nest_depth(lattice, full, fill, int(roots[0]))
    return NestedChain(m, bool(coloring.bits[anchor]), anchor, disk.members(anchor))


def x_from_chain(chain: NestedChain, incidence: ArcIncidence) -> float:
    """0 if C'_m misses the arc, 1 if it touches only the arc, else 1/2."""
    if not (chain.inner & incidence.touches_arc).any():
        return 0.0
    if not (chain.inner & incidence.touches_rest).any():
        return 1.0
    return 0.5


def compute_x_statistic(
    lattice: DiskLattice,
    coloring: Coloring,
    theta: float,
    *,
    arc_start: float = 0.0,
) -> ArcEventOutcome:
    disk = disk_clusters(lattice, coloring)
    chain = nested_chain(lattice, coloring, disk=disk)
    incidence = lattice.arc_incidence(theta, arc_start)
    return ArcEventOutcome(
        event_a=detect_event_a(lattice, coloring, theta, arc_start=arc_start, disk=disk),
        x_stat=x_from_chain(chain, incidence),
        cm_color=chain.cm_color,
        m=chain.m,
    )
