"""Union-find cluster labelling over lattice edge lists.

The kernels are compiled with numba and release the GIL, so the sample
loop can run them on several threads at once. `ClusterSet.from_edges`
unions the endpoints of every kept edge and stores each site's root as
its label: two sites share a label exactly when a path of kept edges joins
them.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numba import njit

from core.percolation.coloring import Coloring
from core.percolation.lattice import DiskLattice


# --- Union-Find (numba-accelerated) ---


@njit(nogil=True)
def _find(parent, x):
    """Root of x, halving the path on the way up."""
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(nogil=True)
def _union_masked(parent, rank, u, v, keep):
    """Union by rank across every edge i with keep[i]."""
    for i in range(u.shape[0]):
        if not keep[i]:
            continue
        a = _find(parent, u[i])
        b = _find(parent, v[i])
        if a == b:
            continue
        if rank[a] < rank[b]:
            a, b = b, a
        parent[b] = a
        if rank[a] == rank[b]:
            rank[a] += 1


@njit(nogil=True)
def _compress(parent):
    roots = np.empty_like(parent)
    for i in range(parent.shape[0]):
        roots[i] = _find(parent, i)
    return roots


class ClusterSet(NamedTuple):
    labels: np.ndarray  # root site per site
    n_clusters: int

    @classmethod
    def from_edges(
        cls, n_sites: int, u: np.ndarray, v: np.ndarray, keep: np.ndarray
    ) -> ClusterSet:
        parent = np.arange(n_sites, dtype=np.int64)
        rank = np.zeros(n_sites, dtype=np.int64)
        _union_masked(parent, rank, u, v, np.ascontiguousarray(keep, dtype=np.bool_))
        labels = _compress(parent)
        return cls(labels, int(np.count_nonzero(labels == np.arange(n_sites))))

    def find(self, site: int) -> int:
        return int(self.labels[site])

    def connected(self, a: int, b: int) -> bool:
        return bool(self.labels[a] == self.labels[b])

    def members(self, site: int) -> np.ndarray:
        """Mask of the sites in the cluster of `site`."""
        return self.labels == self.labels[site]

    def union_of(self, sites: np.ndarray) -> np.ndarray:
        """Mask of every site sharing a cluster with one of `sites`."""
        return np.isin(self.labels, self.labels[sites])


def same_color_clusters(lattice: DiskLattice, coloring: Coloring) -> ClusterSet:
    """Monochromatic clusters on the whole lattice, margin included."""
    bits = coloring.bits
    keep = bits[lattice.edge_u] == bits[lattice.edge_v]
    return ClusterSet.from_edges(lattice.n_sites, lattice.edge_u, lattice.edge_v, keep)


def disk_clusters(lattice: DiskLattice, coloring: Coloring) -> ClusterSet:
    """Monochromatic clusters of the disk trace: in-disk sites, disk edges only.

    Sites outside the disk come out as singletons.
    """
    bits = coloring.bits
    keep = lattice.disk_edge & (bits[lattice.edge_u] == bits[lattice.edge_v])
    return ClusterSet.from_edges(lattice.n_sites, lattice.edge_u, lattice.edge_v, keep)


def region_clusters(lattice: DiskLattice, region: np.ndarray, *, disk_only: bool = True) -> ClusterSet:
    """Components of the site set `region`, whatever the colors."""
    keep = region[lattice.edge_u] & region[lattice.edge_v]
    if disk_only:
        keep &= lattice.disk_edge
    return ClusterSet.from_edges(lattice.n_sites, lattice.edge_u, lattice.edge_v, keep)
