"""scikit-learn style front end.

:class:`ClusterMap` learns the cluster structure of a set of reversible moves
and maps states to canonical representatives.  :class:`ClusterGraphBuilder`
reconstructs the reachable cluster graph from initial states and answers
reachability queries through ``predict``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from . import analysis
from .algebra import BasisCache, TermOrder, buchberger, default_order
from .cluster import cgr
from .exceptions import DimensionMismatch
from .grading import as_grading, check_homogeneous


def check_states(X, n_features=None) -> np.ndarray:
    """Validate a 2-d array of nonnegative integer states."""
    X = check_array(X, dtype=np.int64, ensure_min_samples=1)
    if (X < 0).any():
        raise ValueError("states must be nonnegative")
    if n_features is not None and X.shape[1] != n_features:
        raise DimensionMismatch(f"expected {n_features} species, got {X.shape[1]}")
    return X


def check_moves(M, n_features=None) -> np.ndarray:
    """Validate a 2-d integer array of moves; an empty set gives shape ``(0, n)``."""
    if M is None or len(M) == 0:
        if n_features is None:
            raise ValueError("cannot infer the species count from an empty move set")
        return np.zeros((0, n_features), dtype=np.int64)
    M = check_array(M, dtype=np.int64)
    if n_features is not None and M.shape[1] != n_features:
        raise DimensionMismatch(f"expected {n_features} species, got {M.shape[1]}")
    if not M.any(axis=1).all():
        raise ValueError("zero move")
    return M


def _resolve_grading(grading, moves):
    g = as_grading(grading)
    if not check_homogeneous([tuple(m) for m in moves], g):
        raise ValueError("moves are not homogeneous with respect to the grading")
    return g


class ClusterMap(TransformerMixin, BaseEstimator):
    """Canonical cluster representatives for a set of reversible moves.

    Parameters
    ----------
    grading : array-like
        Positive grading (one row, or several with a positive first row).
    order : TermOrder, optional
        Order used for representatives; grading-weighted degrevlex if None.

    Attributes
    ----------
    basis_ : GroebnerBasis
    grading_ : Grading
    n_features_in_ : int
    """

    def __init__(self, grading=None, order=None):
        self.grading = grading
        self.order = order

    def fit(self, X, y=None):
        """Compute the Gröbner basis of the reversible moves ``X`` (one move per row)."""
        n = as_grading(self.grading).n if self.grading is not None else None
        U = check_moves(X, n)
        self.grading_ = _resolve_grading(self.grading, U)
        self.order_ = self.order if self.order is not None else default_order(self.grading_.primary)
        if not isinstance(self.order_, TermOrder):
            raise TypeError("order must be a TermOrder")
        self.basis_ = buchberger([tuple(u) for u in U], self.order_)
        self.n_features_in_ = U.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "basis_")
        X = check_states(X, self.n_features_in_)
        return np.asarray([self.basis_.normal_form(x) for x in X], dtype=np.int64)

    def same_cluster(self, a, b) -> bool:
        check_is_fitted(self, "basis_")
        return self.basis_.normal_form(a) == self.basis_.normal_form(b)

    def count_bound(self, s, cap=1_000_000) -> int:
        check_is_fitted(self, "basis_")
        return analysis.cluster_count_bound(self.basis_, self.grading_, s, cap)


class ClusterGraphBuilder(BaseEstimator):
    """Reconstruct the cluster graph reachable from a set of initial states.

    Parameters
    ----------
    U, D : array-like of shape (n_moves, n_species)
        Reversible and irreversible moves.
    grading : array-like
        Positive grading making every move homogeneous.
    exhaustive : bool
        Check every cluster member instead of one witness per move.
    node_cap, arc_cap : int
    threads : int
        Worker processes for precomputing colon bases.
    species : list of str, optional
    """

    def __init__(self, U=None, D=None, grading=None, exhaustive=False, node_cap=100_000,
                 arc_cap=1_000_000, threads=1, species=None):
        self.U = U
        self.D = D
        self.grading = grading
        self.exhaustive = exhaustive
        self.node_cap = node_cap
        self.arc_cap = arc_cap
        self.threads = threads
        self.species = species

    def fit(self, X, y=None):
        """Build the cluster graph from the initial states in ``X``."""
        g = as_grading(self.grading)
        S = check_states(X, g.n)
        U = check_moves(self.U, g.n)
        D = check_moves(self.D, g.n)
        g = _resolve_grading(g, np.vstack([U, D]))
        Ut = [tuple(int(v) for v in u) for u in U]
        Dt = [tuple(int(v) for v in d) for d in D]
        self.cache_ = BasisCache(Ut, g)
        if not self.exhaustive:
            self.cache_.populate(Dt, threads=self.threads)
        self.graph_ = cgr(Ut, Dt, [tuple(int(v) for v in s) for s in S], self.cache_,
                          exhaustive=self.exhaustive, node_cap=self.node_cap,
                          arc_cap=self.arc_cap, species=self.species)
        self.n_features_in_ = g.n
        return self

    def transform(self, X):
        """Canonical representatives of the states in ``X``."""
        check_is_fitted(self, "graph_")
        X = check_states(X, self.n_features_in_)
        G = self.graph_.basis
        return np.asarray([G.normal_form(x) for x in X], dtype=np.int64)

    def predict(self, X):
        """For each target state, whether it is reachable from the first initial state."""
        check_is_fitted(self, "graph_")
        X = check_states(X, self.n_features_in_)
        s = self.graph_.initial[0]
        return np.asarray([analysis.connected(self.graph_, s, t).connected for t in X])
