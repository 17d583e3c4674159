"""Site colorings: black (True) or white (False) for every lattice site."""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from typing import NamedTuple

import numpy as np

from core.errors import DomainError
from core.percolation.lattice import DiskLattice

_HEADER = "# sleperc coloring"


class Coloring(NamedTuple):
    bits: np.ndarray
    seed: int | None = None
    index: int | None = None

    @property
    def black_fraction(self) -> float:
        return float(self.bits.mean())


def sample_coloring(
    lattice: DiskLattice, seed: int | np.random.Generator, *, index: int | None = None
) -> Coloring:
    """Independent fair coin per site."""
    if isinstance(seed, np.random.Generator):
        rng, provenance = seed, None
    else:
        rng, provenance = np.random.default_rng(seed), int(seed)
    bits = rng.random(lattice.n_sites) < 0.5
    return Coloring(bits, provenance, index)


def uniform_coloring(lattice: DiskLattice, black: bool) -> Coloring:
    return Coloring(np.full(lattice.n_sites, bool(black)))


def swap_colors(coloring: Coloring) -> Coloring:
    return coloring._replace(bits=~coloring.bits)


def with_site(coloring: Coloring, site: int, black: bool) -> Coloring:
    bits = coloring.bits.copy()
    bits[site] = black
    return coloring._replace(bits=bits)


def enumerate_colorings(lattice: DiskLattice) -> Iterator[Coloring]:
    """
    Every coloring of the in-disk sites, each paired with both uniform
    colors of the sites outside the disk.

    The set is closed under `swap_colors`. Its size is 2 ** (n_in_disk + 1),
    so only use this on tiny lattices.
    """
    disk = np.flatnonzero(lattice.in_disk)
    if len(disk) > 20:
        raise DomainError(
            f"refusing to enumerate 2**{len(disk) + 1} colorings", code="enumeration_size"
        )
    for index, combo in enumerate(itertools.product((False, True), repeat=len(disk) + 1)):
        bits = np.full(lattice.n_sites, combo[0])
        bits[disk] = combo[1:]
        yield Coloring(bits, None, index)


def dump_coloring(lattice: DiskLattice, coloring: Coloring) -> str:
    """One `q r color` line per site (color 1 = black) after a header line."""
    lines = [
        f"{_HEADER} delta={lattice.delta!r} margin={lattice.margin!r} "
        f"seed={coloring.seed} index={coloring.index}"
    ]
    for (q, r), black in zip(lattice.coords, coloring.bits):
        lines.append(f"{int(q)} {int(r)} {int(black)}")
    return "\n".join(lines) + "\n"


def load_coloring(lattice: DiskLattice, text: str) -> Coloring:
    """Inverse of `dump_coloring`. Every lattice site must be listed once."""
    bits = np.zeros(lattice.n_sites, dtype=bool)
    seen = np.zeros(lattice.n_sites, dtype=bool)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3 or parts[2] not in ("0", "1"):
            raise DomainError(f"line {number}: expected 'q r 0|1', got {raw!r}", code="bad_dump")
        try:
            site = lattice.site_of(int(parts[0]), int(parts[1]))
        except ValueError:
            raise DomainError(f"line {number}: bad coordinates {raw!r}", code="bad_dump") from None
        if site < 0:
            raise DomainError(f"line {number}: site {parts[0]},{parts[1]} not in lattice", code="bad_dump")
        if seen[site]:
            raise DomainError(f"line {number}: site listed twice", code="bad_dump")
        seen[site] = True
        bits[site] = parts[2] == "1"
    if not seen.all():
        raise DomainError(
            f"{int((~seen).sum())} lattice sites missing from the dump", code="bad_dump"
        )
    return Coloring(bits)
