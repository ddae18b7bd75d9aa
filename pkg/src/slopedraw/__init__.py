"""slopedraw: planar straight-line drawings with bounded slope sets.

Draws Halin graphs, cycle-trees, cycle-pseudotrees and nested pseudotrees
using explicit slope families, and independently verifies planarity, slope
counts and all construction invariants with exact arithmetic.
"""

from .graph_core import (
    GraphClass,
    PlaneGraph,
    TreeDecomposition,
    classify,
    degree_stats,
    tree_decomposition,
    validate_embedding,
)
from .slope_set import SlopeSet, build_slope_set

__all__ = [
    "PlaneGraph",
    "GraphClass",
    "TreeDecomposition",
    "classify",
    "degree_stats",
    "tree_decomposition",
    "validate_embedding",
    "SlopeSet",
    "build_slope_set",
]
