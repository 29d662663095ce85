"""Robust tree and forest structure learning from categorical data.

Mutual information between variable pairs is bounded under the imprecise
Dirichlet model, edges are partially ordered by certified dominance, and
the learner returns the edges shared by every maximum spanning tree that
is consistent with those bounds.
"""
from .data import ContingencyTable, Dataset, Variable, ingest, pair_counts, read_csv, triple_counts
from .dominance import (
    CredibleParams,
    DominanceVerdict,
    credible_interval,
    dominates_credible,
    dominates_disjoint,
    dominates_shared,
    mi_diff_variance,
    mi_variance,
)
from .graph import (
    Forest,
    SetWeightedGraph,
    Tree,
    build_graph,
    chow_liu_tree,
    detect_strong_approx,
    detect_strong_exact,
    threshold_forest,
)
from .idm import IdmConfig, Interval, entropy_interval, expected_entropy, expected_mi, mi_interval
from .special import HContext, PolyOrder, h_family, polygamma

__all__ = [
    "ContingencyTable", "Dataset", "Variable", "ingest", "pair_counts", "read_csv", "triple_counts",
    "CredibleParams", "DominanceVerdict", "credible_interval", "dominates_credible",
    "dominates_disjoint", "dominates_shared", "mi_diff_variance", "mi_variance",
    "Forest", "SetWeightedGraph", "Tree", "build_graph", "chow_liu_tree",
    "detect_strong_approx", "detect_strong_exact", "threshold_forest",
    "IdmConfig", "Interval", "entropy_interval", "expected_entropy", "expected_mi", "mi_interval",
    "HContext", "PolyOrder", "h_family", "polygamma",
]

__version__ = "0.1.0"
