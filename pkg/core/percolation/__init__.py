from core.percolation.clusters import ClusterSet, disk_clusters, same_color_clusters
from core.percolation.coloring import (
    Coloring,
    dump_coloring,
    enumerate_colorings,
    load_coloring,
    sample_coloring,
    swap_colors,
    uniform_coloring,
    with_site,
)
from core.percolation.estimate import (
    ArcSampleEvaluator,
    estimate_arc_probability,
    estimate_arc_sweep,
)
from core.percolation.events import (
    ArcEventOutcome,
    NestedChain,
    compute_x_statistic,
    detect_event_a,
    nested_chain,
)
from core.percolation.interface import trace_interface_beta
from core.percolation.lattice import (
    ArcIncidence,
    BoundaryInterval,
    DiskLattice,
    build_disk_lattice,
)

__all__ = [
    "ArcEventOutcome",
    "ArcIncidence",
    "ArcSampleEvaluator",
    "BoundaryInterval",
    "ClusterSet",
    "Coloring",
    "DiskLattice",
    "NestedChain",
    "build_disk_lattice",
    "compute_x_statistic",
    "detect_event_a",
    "disk_clusters",
    "dump_coloring",
    "enumerate_colorings",
    "estimate_arc_probability",
    "estimate_arc_sweep",
    "load_coloring",
    "nested_chain",
    "same_color_clusters",
    "sample_coloring",
    "swap_colors",
    "trace_interface_beta",
    "uniform_coloring",
    "with_site",
]
