import numpy as np
import pytest

from core.errors import DomainError
from core.percolation import (
    dump_coloring,
    enumerate_colorings,
    load_coloring,
    sample_coloring,
    swap_colors,
    uniform_coloring,
    with_site,
)
from core.percolation.clusters import disk_clusters, same_color_clusters


def test_sampling_is_deterministic(small_lattice):
    a = sample_coloring(small_lattice, 17, index=3)
    b = sample_coloring(small_lattice, 17, index=3)
    assert np.array_equal(a.bits, b.bits)
    assert (a.seed, a.index) == (17, 3)
    assert not np.array_equal(a.bits, sample_coloring(small_lattice, 18).bits)


def test_generator_seed_has_no_provenance(micro_lattice):
    coloring = sample_coloring(micro_lattice, np.random.default_rng(0))
    assert coloring.seed is None


def test_fair_coin(small_lattice):
    fractions = [sample_coloring(small_lattice, seed).black_fraction for seed in range(5)]
    assert abs(np.mean(fractions) - 0.5) < 0.02


def test_swap_and_with_site(micro_lattice):
    black = uniform_coloring(micro_lattice, True)
    assert black.black_fraction == 1.0
    assert swap_colors(black).black_fraction == 0.0
    one = with_site(black, micro_lattice.origin_site, False)
    assert not one.bits[micro_lattice.origin_site]
    assert black.bits[micro_lattice.origin_site]


def test_dump_load(micro_lattice):
    coloring = sample_coloring(micro_lattice, 5, index=0)
    text = dump_coloring(micro_lattice, coloring)
    assert text.startswith("# sleperc coloring delta=1.2 margin=0.0 seed=5 index=0\n")
    assert len(text.splitlines()) == micro_lattice.n_sites + 1
    assert np.array_equal(load_coloring(micro_lattice, text).bits, coloring.bits)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda lines: lines[:-1],
        lambda lines: lines + [lines[-1]],
        lambda lines: lines[:-1] + ["99 99 1"],
        lambda lines: lines[:-1] + [lines[-1][:-1] + "2"],
        lambda lines: lines[:-1] + ["a b 1"],
        lambda lines: lines[:-1] + ["0 0"],
    ],
)
def test_load_rejects_bad_dumps(micro_lattice, mutate):
    lines = dump_coloring(micro_lattice, uniform_coloring(micro_lattice, False)).splitlines()
    with pytest.raises(DomainError) as err:
        load_coloring(micro_lattice, "\n".join(mutate(lines)))
    assert err.value.code == "bad_dump"


def test_enumeration_is_complete_and_swap_closed(micro_lattice):
    colorings = list(enumerate_colorings(micro_lattice))
    assert len(colorings) == 2 ** (7 + 1)
    seen = {c.bits.tobytes() for c in colorings}
    assert len(seen) == len(colorings)
    assert all(swap_colors(c).bits.tobytes() in seen for c in colorings)
    outside = ~micro_lattice.in_disk
    assert all(len(set(c.bits[outside].tolist())) == 1 for c in colorings)


def test_enumeration_refuses_large_lattices(tiny_lattice):
    with pytest.raises(DomainError):
        next(enumerate_colorings(tiny_lattice))


def test_uniform_coloring_is_one_cluster(tiny_lattice):
    white = uniform_coloring(tiny_lattice, False)
    assert same_color_clusters(tiny_lattice, white).n_clusters == 1
    disk = disk_clusters(tiny_lattice, white)
    # disk trace: one cluster plus a singleton per site outside the disk
    assert disk.n_clusters == 1 + int((~tiny_lattice.in_disk).sum())


def test_clusters_follow_colors(tiny_lattice):
    coloring = sample_coloring(tiny_lattice, 2)
    clusters = same_color_clusters(tiny_lattice, coloring)
    u, v = tiny_lattice.edge_u, tiny_lattice.edge_v
    same = coloring.bits[u] == coloring.bits[v]
    assert (clusters.labels[u[same]] == clusters.labels[v[same]]).all()
    for site in range(0, tiny_lattice.n_sites, 7):
        members = clusters.members(site)
        assert (coloring.bits[members] == coloring.bits[site]).all()


def test_ring_is_one_cluster_apart_from_the_origin(micro_lattice):
    coloring = uniform_coloring(micro_lattice, False)
    ring = micro_lattice.neighbors[micro_lattice.origin_site]
    for site in ring:
        coloring = with_site(coloring, site, True)
    clusters = same_color_clusters(micro_lattice, coloring)
    assert all(clusters.connected(ring[0], site) for site in ring)
    assert not clusters.connected(ring[0], micro_lattice.origin_site)
    assert clusters.find(micro_lattice.origin_site) == micro_lattice.origin_site
    assert clusters.members(micro_lattice.origin_site).sum() == 1
