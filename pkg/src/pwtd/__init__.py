"""Elimination forests of height at most 10ab for graphs of pathwidth below a with no 2^b-vertex path."""

from .builder import BuildResult, InvariantViolation, PreconditionError, build, dfs_forest
from .corpus import CorpusConfig, CorpusReport, run_corpus
from .decomposition import (
    DecompositionError,
    EliminationForest,
    ForestError,
    Interval,
    PathDecomposition,
    validate_elimination_forest,
    validate_path_decomposition,
)
from .graph import Graph, GraphFormatError, generate, parse_graph, serialize_graph
from .linkage import Cut, Linkage, check_linked, is_linked, make_linked, repair_linked, vertex_disjoint_linkage
from .oracles import exact_pathwidth, exact_treedepth, longest_path_order, min_b

__version__ = "0.1.0"

__all__ = [
    "BuildResult",
    "CorpusConfig",
    "CorpusReport",
    "Cut",
    "DecompositionError",
    "EliminationForest",
    "ForestError",
    "Graph",
    "GraphFormatError",
    "Interval",
    "InvariantViolation",
    "Linkage",
    "PathDecomposition",
    "PreconditionError",
    "build",
    "check_linked",
    "dfs_forest",
    "exact_pathwidth",
    "exact_treedepth",
    "generate",
    "is_linked",
    "longest_path_order",
    "make_linked",
    "min_b",
    "parse_graph",
    "repair_linked",
    "run_corpus",
    "serialize_graph",
    "validate_elimination_forest",
    "validate_path_decomposition",
    "vertex_disjoint_linkage",
]
