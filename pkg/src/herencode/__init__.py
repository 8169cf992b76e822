"""Encoding toolkit for hereditary graph classes.

Graphs, pattern recognition, a modular-decomposition codec, adjacency
labeling schemes, a functional-vertex codec, structural certificates for
bipartite classes, and brute-force counting oracles.
"""

__version__ = "0.1.0"

from .graph import BipartiteGraph, Graph, bipartite_complement, complement  # noqa: E402
from .recognition import ClassSpec, class_violation, contains_induced, free, in_class  # noqa: E402

__all__ = ["BipartiteGraph", "ClassSpec", "Graph", "__version__", "bipartite_complement", "class_violation",
           "complement", "contains_induced", "free", "in_class"]
