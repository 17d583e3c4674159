"""Hexagonal faces of the triangular lattice, clipped to the unit disk.

Sites are hexagons addressed by axial coordinates (q, r). The center of
site (q, r) is offset + delta * (q + r/2, r * sqrt(3)/2), so neighbouring
centres sit delta apart and each hexagon has circumradius delta/sqrt(3).
Neighbour direction k (k = 0..5) points at angle 60k degrees. Edge k is the
side facing that neighbour, and corner k sits at 30 + 60k degrees, between
directions k and k+1.

Every corner is shared by exactly three hexagons. Its key is the integer
pair (sum q, sum r) over those three, and its position is computed from the
key alone. Neighbouring hexagons therefore agree bit for bit on shared
corners, on edge/circle crossings and on the angles of their boundary
intervals, and the interface tracer can chain pieces by key equality.

Flags per site:

* `in_disk`: the hexagon meets the closed unit disk;
* `inside_open`: the hexagon lies inside the open disk;
* two in-disk sites are disk-adjacent when their shared edge meets the
  closed disk. That is the connectivity of a cluster cut down to the disk.

Sites are the hexagons whose centres lie within 1 + margin, plus the
in-disk hexagons and all of their neighbours. Every in-disk site therefore
has its six neighbours present.
"""

from __future__ import annotations

import math
import threading
from typing import NamedTuple

import numpy as np

from constants import (
    GENERIC_CLEARANCE,
    MARGIN_PER_DELTA,
    MAX_DELTA,
    MIN_MARGIN,
    OFFSET_FRACTION,
    TWO_PI,
)
from core.errors import DegenerateGeometryError, DomainError
from utils.validation import require_finite

SQRT3 = math.sqrt(3.0)
DIRECTIONS = np.array([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)], dtype=np.int64)
# Unit normals of edges 0, 1, 2 (edges 3..5 are their negatives).
_NORMALS = np.array([(1.0, 0.0), (0.5, SQRT3 / 2), (-0.5, SQRT3 / 2)])

CornerKey = tuple[int, int]
# ("v", corner) for a hexagon corner, ("x", corner_lo, corner_hi, j) for the
# j-th root of the circle on that edge, or "one" / "etheta" for arc cuts.
PointKey = tuple | str


class BoundaryInterval(NamedTuple):
    """Counterclockwise angular interval of a hexagon's trace on the circle.

    `start` is in [0, 2pi); `end` > `start` and exceeds 2pi when the
    interval wraps through angle 0.
    """

    start: float
    end: float
    start_key: PointKey
    end_key: PointKey


class ArcIncidence(NamedTuple):
    """Which sites touch the arc [start, start + theta] and which the rest."""

    start: float
    theta: float
    touches_arc: np.ndarray
    touches_rest: np.ndarray


class Segment(NamedTuple):
    """Part of a shared edge inside the closed disk, with keyed endpoints."""

    a: tuple[float, float]
    b: tuple[float, float]
    a_key: PointKey
    b_key: PointKey


def corner_xy(delta: float, offset: tuple[float, float], sq, sr):
    """Position of the corner with key (sq, sr); works on scalars or arrays."""
    x = offset[0] + delta * (sq + sr / 2.0) / 3.0
    y = offset[1] + delta * (sr * (SQRT3 / 2.0)) / 3.0
    return x, y


def _segment_distance(ax, ay, bx, by):
    dx, dy = bx - ax, by - ay
    t = np.clip(-(ax * dx + ay * dy) / (dx * dx + dy * dy), 0.0, 1.0)
    return np.hypot(ax + t * dx, ay + t * dy)


def circle_roots(p0: tuple[float, float], p1: tuple[float, float]) -> tuple[float, float] | None:
    """Parameters t1 <= t2 where p0 + t (p1 - p0) meets the unit circle."""
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    a = dx * dx + dy * dy
    b = 2.0 * (p0[0] * dx + p0[1] * dy)
    c = p0[0] * p0[0] + p0[1] * p0[1] - 1.0
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return None
    root = math.sqrt(disc)
    return (-b - root) / (2.0 * a), (-b + root) / (2.0 * a)


def _angle(x: float, y: float) -> float:
    theta = math.atan2(y, x)
    return theta + TWO_PI if theta < 0 else theta


class DiskLattice:
    """Immutable hexagon geometry for one (delta, margin, offset)."""

    def __init__(
        self,
        delta: float,
        margin: float,
        offset: tuple[float, float],
        coords: np.ndarray,
    ):
        self.delta = delta
        self.margin = margin
        self.offset = offset
        self.coords = coords
        self.n_sites = len(coords)
        q = coords[:, 0]
        r = coords[:, 1]
        self.centers = np.column_stack(
            (offset[0] + delta * (q + r / 2.0), offset[1] + delta * (r * (SQRT3 / 2.0)))
        )
        self._index = {(int(a), int(b)): i for i, (a, b) in enumerate(coords)}

        # corner keys (N, 6, 2) and positions (N, 6)
        nxt = np.roll(DIRECTIONS, -1, axis=0)
        self.corner_keys = (3 * coords)[:, None, :] + (DIRECTIONS + nxt)[None, :, :]
        self.corner_x, self.corner_y = corner_xy(
            delta, offset, self.corner_keys[..., 0], self.corner_keys[..., 1]
        )

        # Dense (q, r) -> index grid with a one-cell border of -1.
        low = coords.min(axis=0) - 1
        grid = np.full(tuple(coords.max(axis=0) - low + 2), -1, dtype=np.int64)
        grid[q - low[0], r - low[1]] = np.arange(self.n_sites)
        shifted = coords[:, None, :] + DIRECTIONS[None, :, :] - low
        self.neighbors = grid[shifted[..., 0], shifted[..., 1]]

        self.in_disk = self._hex_distance() <= 1.0
        self.inside_open = np.hypot(self.corner_x, self.corner_y).max(axis=1) < 1.0
        self._build_edges()
        self.origin_site = self._generic_site(0.0, 0.0, "the origin")
        self._generic_site(1.0, 0.0, "the point 1")
        self.intervals = self._build_intervals()
        self.boundary_sites = np.array(sorted(self.intervals), dtype=np.int64)
        self._incidence: dict[tuple[float, float], ArcIncidence] = {}
        self._segments: dict[int, Segment] = {}
        self._lock = threading.Lock()

    # ------------------------------------------------------------------
    # Geometry helpers
    # ------------------------------------------------------------------

    def _hex_distance(self) -> np.ndarray:
        """Distance from the origin to each hexagon (0 when it contains 0)."""
        ax, ay = self.corner_x, self.corner_y
        bx, by = np.roll(ax, 1, axis=1), np.roll(ay, 1, axis=1)
        dist = _segment_distance(ax, ay, bx, by).min(axis=1)
        proj = np.abs(-self.centers @ _NORMALS.T)
        contains = (proj <= self.delta / 2.0).all(axis=1)
        return np.where(contains, 0.0, dist)

    def _build_edges(self) -> None:
        us, vs, ks = [], [], []
        for k in range(3):
            v = self.neighbors[:, k]
            u = np.flatnonzero(v >= 0)
            us.append(u)
            vs.append(v[u])
            ks.append(np.full(len(u), k, dtype=np.int64))
        self.edge_u = np.concatenate(us)
        self.edge_v = np.concatenate(vs)
        self.edge_dir = np.concatenate(ks)
        # Edge k of hexagon u runs from corner k-1 to corner k.
        lo = self.corner_keys[self.edge_u, (self.edge_dir - 1) % 6]
        hi = self.corner_keys[self.edge_u, self.edge_dir]
        swap = (lo[:, 0] > hi[:, 0]) | ((lo[:, 0] == hi[:, 0]) & (lo[:, 1] > hi[:, 1]))
        first = np.where(swap[:, None], hi, lo)
        second = np.where(swap[:, None], lo, hi)
        self.edge_keys = np.stack((first, second), axis=1)
        ax, ay = corner_xy(self.delta, self.offset, first[:, 0], first[:, 1])
        bx, by = corner_xy(self.delta, self.offset, second[:, 0], second[:, 1])
        self.disk_edge = _segment_distance(ax, ay, bx, by) <= 1.0

    def site_of(self, q: int, r: int) -> int:
        """Index of site (q, r), or -1 when it is not part of the lattice."""
        return self._index.get((int(q), int(r)), -1)

    def corner_position(self, key: CornerKey) -> tuple[float, float]:
        x, y = corner_xy(self.delta, self.offset, key[0], key[1])
        return float(x), float(y)

    def clearance(self, site: int, x: float, y: float) -> float:
        """Distance-like margin of (x, y) inside hexagon `site` (< 0 outside)."""
        d = np.array([x, y]) - self.centers[site]
        return float(self.delta / 2.0 - np.abs(_NORMALS @ d).max())

    def locate(self, x: float, y: float) -> int:
        """Site whose hexagon contains (x, y), or -1 outside the lattice."""
        rf = (y - self.offset[1]) / (self.delta * SQRT3 / 2.0)
        qf = (x - self.offset[0]) / self.delta - rf / 2.0
        best, best_d = -1, math.inf
        for q in (math.floor(qf), math.floor(qf) + 1):
            for r in (math.floor(rf), math.floor(rf) + 1):
                site = self.site_of(q, r)
                if site < 0:
                    continue
                cx, cy = self.centers[site]
                d = math.hypot(x - cx, y - cy)
                if d < best_d:
                    best, best_d = site, d
        return best

    def _generic_site(self, x: float, y: float, label: str) -> int:
        site = self.locate(x, y)
        if site < 0 or self.clearance(site, x, y) <= GENERIC_CLEARANCE * self.delta:
            raise DegenerateGeometryError(
                f"{label} lies on a hexagon boundary for delta={self.delta!r}; "
                "choose another offset",
                code="degenerate_point",
            )
        return site

    # ------------------------------------------------------------------
    # Boundary incidence
    # ------------------------------------------------------------------

    def _edge_points(self, site: int, k: int) -> tuple[CornerKey, CornerKey]:
        lo = tuple(int(v) for v in self.corner_keys[site, (k - 1) % 6])
        hi = tuple(int(v) for v in self.corner_keys[site, k])
        return (lo, hi) if lo <= hi else (hi, lo)

    def _build_intervals(self) -> dict[int, tuple[BoundaryInterval, ...]]:
        out: dict[int, tuple[BoundaryInterval, ...]] = {}
        for site in np.flatnonzero(self.in_disk & ~self.inside_open):
            crossings: list[tuple[float, PointKey]] = []
            for k in range(6):
                lo, hi = self._edge_points(site, k)
                p0, p1 = self.corner_position(lo), self.corner_position(hi)
                roots = circle_roots(p0, p1)
                if roots is None:
                    continue
                for j, t in enumerate(roots):
                    if 0.0 < t < 1.0:
                        px = p0[0] + t * (p1[0] - p0[0])
                        py = p0[1] + t * (p1[1] - p0[1])
                        crossings.append((_angle(px, py), ("x", lo, hi, j)))
            if len(crossings) < 2:
                continue
            crossings.sort(key=lambda c: c[0])
            pieces = []
            for i, (start, start_key) in enumerate(crossings):
                end, end_key = crossings[(i + 1) % len(crossings)]
                if i + 1 == len(crossings):
                    end += TWO_PI
                mid = 0.5 * (start + end)
                if self.clearance(int(site), math.cos(mid), math.sin(mid)) >= 0:
                    pieces.append(BoundaryInterval(start, end, start_key, end_key))
            if pieces:
                out[int(site)] = tuple(pieces)
        return out

    def arc_incidence(self, theta: float, start: float = 0.0) -> ArcIncidence:
        """
        Sites whose boundary interval meets the closed arc [start, start+theta]
        and those meeting the open remainder. Cached per (start, theta).

        Raises DegenerateGeometryError if an arc endpoint sits on a hexagon
        boundary.
        """
        theta = float(theta)
        start = float(start) % TWO_PI
        if not (0 < theta < TWO_PI):
            raise DomainError(f"theta must lie in (0, 2*pi), got {theta!r}", code="theta_range")
        key = (start, theta)
        cached = self._incidence.get(key)
        if cached is not None:
            return cached
        for angle, label in ((start, "the arc start"), (start + theta, "e^{i theta}")):
            self._generic_site(math.cos(angle), math.sin(angle), label)
        touches_arc = np.zeros(self.n_sites, dtype=bool)
        touches_rest = np.zeros(self.n_sites, dtype=bool)
        for site, pieces in self.intervals.items():
            for piece in pieces:
                s = (piece.start - start) % TWO_PI
                e = s + (piece.end - piece.start)
                if s <= theta or e >= TWO_PI:
                    touches_arc[site] = True
                if e > theta:
                    touches_rest[site] = True
        incidence = ArcIncidence(start, theta, touches_arc, touches_rest)
        with self._lock:
            self._incidence[key] = incidence
        return incidence

    def edge_segment(self, edge: int) -> Segment:
        """The closed-disk part of edge `edge`, with canonical endpoint keys."""
        cached = self._segments.get(edge)
        if cached is not None:
            return cached
        lo = tuple(int(v) for v in self.edge_keys[edge, 0])
        hi = tuple(int(v) for v in self.edge_keys[edge, 1])
        p0, p1 = self.corner_position(lo), self.corner_position(hi)
        roots = circle_roots(p0, p1)
        if roots is None or roots[0] > 1.0 or roots[1] < 0.0:
            raise DomainError(f"edge {edge} does not meet the disk", code="edge_outside")
        t1, t2 = roots

        def _point(t: float) -> tuple[float, float]:
            return (p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1]))

        a, a_key = (p0, ("v", lo)) if t1 <= 0.0 else (_point(t1), ("x", lo, hi, 0))
        b, b_key = (p1, ("v", hi)) if t2 >= 1.0 else (_point(t2), ("x", lo, hi, 1))
        segment = Segment(a, b, a_key, b_key)
        with self._lock:
            self._segments[edge] = segment
        return segment


def default_margin(delta: float) -> float:
    return max(MARGIN_PER_DELTA * delta, MIN_MARGIN)


def build_disk_lattice(
    delta: float,
    margin: float | None = None,
    *,
    offset: tuple[float, float] | None = None,
) -> DiskLattice:
    """
    Build the clipped lattice for mesh `delta`.

    `margin` defaults to max(10 delta, 0.1); `offset` to delta * (1/7, 1/13).
    Raises DegenerateGeometryError when 0 or 1 falls on a hexagon edge.
    """
    delta = float(delta)
    if not (0 < delta < MAX_DELTA):
        raise DomainError(f"delta must lie in (0, {MAX_DELTA:g}), got {delta!r}", code="delta_range")
    margin = default_margin(delta) if margin is None else float(margin)
    require_finite("margin", margin)
    if margin < 0:
        raise DomainError(f"margin must be >= 0, got {margin!r}", code="margin_range")
    if offset is None:
        offset = (delta * OFFSET_FRACTION[0], delta * OFFSET_FRACTION[1])
    offset = (float(offset[0]), float(offset[1]))

    reach = 1.0 + margin + 3.0 * delta
    span = int(math.ceil(reach / delta * (1.0 + 1.0 / SQRT3))) + 3
    axis = np.arange(-span, span + 1, dtype=np.int64)
    rr, qq = np.meshgrid(axis, axis, indexing="ij")
    q, r = qq.ravel(), rr.ravel()
    cx = offset[0] + delta * (q + r / 2.0)
    cy = offset[1] + delta * (r * (SQRT3 / 2.0))
    near = np.hypot(cx, cy) <= reach
    candidates = DiskLattice(delta, margin, offset, np.column_stack((q[near], r[near])))

    keep = (np.hypot(*candidates.centers.T) <= 1.0 + margin) | candidates.in_disk
    nb = candidates.neighbors[candidates.in_disk]
    keep[nb[nb >= 0]] = True
    return DiskLattice(delta, margin, offset, candidates.coords[keep])
