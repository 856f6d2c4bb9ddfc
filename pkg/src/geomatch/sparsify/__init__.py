"""Depth reduction for fat objects and the cluster query structures it uses."""

from .core import (
    PatternGraph,
    SparsifierResult,
    assign_clusters,
    build_pattern_graph,
    check_fat,
    cluster_cap,
    combine_matchings,
    depth_cap,
    depth_constant,
    max_pattern_degree,
    sparsified_matching,
    sparsify,
    sparsify_one_edge,
    square_side,
)
from .envelope import Envelope, union_pierced
from .query import NaiveQueryStructure, UnitDiskQueryStructure, make_structure

__all__ = [
    "Envelope",
    "NaiveQueryStructure",
    "PatternGraph",
    "SparsifierResult",
    "UnitDiskQueryStructure",
    "assign_clusters",
    "build_pattern_graph",
    "check_fat",
    "cluster_cap",
    "combine_matchings",
    "depth_cap",
    "depth_constant",
    "make_structure",
    "max_pattern_degree",
    "sparsified_matching",
    "sparsify",
    "sparsify_one_edge",
    "square_side",
    "union_pierced",
]
