"""Cluster graphs of integer transition systems via binomial Gröbner bases."""

__version__ = "0.1.0"

from .algebra import (
                      BasisCache,
                      Binomial,
                      Cmp,
                      GroebnerBasis,
                      TermOrder,
                      buchberger,
                      colon_by_monomial,
                      colon_by_variable,
                      compare,
                      default_order,
                      is_connected,
                      make_max_order,
                      normal_form,
                      spair,
)
from .analysis import (
                      PathQueryResult,
                      cluster_count_bound,
                      connected,
                      enumerate_paths,
                      essential_arcs,
)
from .cluster import Arc, ClusterGraph, cct, cgr, ci
from .estimator import ClusterGraphBuilder, ClusterMap
from .grading import (
                      Grading,
                      check_homogeneous,
                      fiber_enumerate,
                      find_positive_grading,
                      make_positive_multigrading,
)
from .reactions import (
                      BalanceMatrix,
                      TransitionSet,
                      encode_overall,
                      enumerate_elementary,
                      partition_transitions,
)

__all__ = [
    "Arc", "BalanceMatrix", "BasisCache", "Binomial", "ClusterGraph", "ClusterGraphBuilder",
    "ClusterMap", "Cmp", "Grading", "GroebnerBasis", "PathQueryResult", "TermOrder",
    "TransitionSet", "buchberger", "cct", "cgr", "check_homogeneous", "ci",
    "cluster_count_bound", "colon_by_monomial", "colon_by_variable", "compare", "connected",
    "default_order", "encode_overall", "enumerate_elementary", "enumerate_paths",
    "essential_arcs", "fiber_enumerate", "find_positive_grading", "is_connected",
    "make_max_order", "make_positive_multigrading", "normal_form", "partition_transitions",
    "spair",
]
