"""Balance matrices, elementary reaction enumeration and the reversible/irreversible split."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .exceptions import CapExceeded, DimensionMismatch
from .grading import Grading, as_grading


@dataclass
class BalanceMatrix:
    """Integer conservation matrix with one column per species."""

    rows: np.ndarray
    species: list
    row_labels: list = field(default_factory=list)

    def __post_init__(self):
        self.rows = np.atleast_2d(np.asarray(self.rows, dtype=np.int64))
        self.species = list(self.species)
        if self.rows.shape[1] != len(self.species):
            raise DimensionMismatch(
                f"matrix has {self.rows.shape[1]} columns but {len(self.species)} species")
        if not self.row_labels:
            self.row_labels = [f"r{k}" for k in range(self.rows.shape[0])]

    @property
    def n(self):
        return len(self.species)

    @property
    def mass_rows(self):
        """Indices of rows with no negative entry."""
        return [k for k, r in enumerate(self.rows) if (r >= 0).all()]


@dataclass
class TransitionSet:
    """Reversible moves ``U`` (one sign stored) and irreversible moves ``D``."""

    U: list
    D: list
    species: list
    grading: Grading | None = None

    def __post_init__(self):
        n = len(self.species)
        self.U = [tuple(int(x) for x in u) for u in self.U]
        self.D = [tuple(int(x) for x in d) for d in self.D]
        for v in itertools.chain(self.U, self.D):
            if len(v) != n:
                raise DimensionMismatch(f"move {v} does not have {n} entries")
            if not any(v):
                raise ValueError("zero move")
        if self.grading is not None:
            self.grading = as_grading(self.grading)

    @property
    def n(self):
        return len(self.species)

    def moves(self):
        """The full move set ``U ∪ -U ∪ D``."""
        out = set(self.U) | {tuple(-x for x in u) for u in self.U} | set(self.D)
        return out


@dataclass
class ElementaryEnumeration:
    """Result of :func:`enumerate_elementary`.

    ``systems`` maps each reactant multiset ``r`` (as an exponent tuple) to the
    list of nonzero ``d = y - r`` with ``A y = A r``.
    """

    systems: dict
    n: int

    @property
    def n_systems(self):
        return len(self.systems)

    @property
    def instances(self):
        """Solution count summed over systems (``y != r``)."""
        return sum(len(v) for v in self.systems.values())

    @property
    def distinct(self):
        """Globally distinct reaction vectors, sorted."""
        return sorted({d for v in self.systems.values() for d in v})

    @property
    def exact(self):
        """Distinct vectors whose negative part is exactly the reactant multiset."""
        out = set()
        for r, ds in self.systems.items():
            for d in ds:
                if all((-x if x < 0 else 0) == ri for x, ri in zip(d, r)):
                    out.add(d)
        return sorted(out)

    def counts(self):
        return {
            "systems": self.n_systems,
            "instances": self.instances,
            "distinct": len(self.distinct),
            "exact": len(self.exact),
        }


def reactant_multisets(n, max_reactants=2):
    """Exponent vectors with ``1 <= |r| <= max_reactants``, grouped by size."""
    out = []
    for size in range(1, max_reactants + 1):
        for combo in itertools.combinations_with_replacement(range(n), size):
            r = [0] * n
            for k in combo:
                r[k] += 1
            out.append(tuple(r))
    return out


def _solve_fiber(A, bounds, target_bound, target_eq, signed, cap):
    """Nonnegative ``y`` with ``bounds @ y == target_bound`` and ``signed @ y == target_eq``.

    ``bounds`` has nonnegative rows and at least one strictly positive row,
    which makes the search finite.
    """
    n = bounds.shape[1]
    cols = [tuple(int(x) for x in bounds[:, k]) for k in range(n)]
    scols = [tuple(int(x) for x in signed[:, k]) for k in range(n)]
    out = []
    y = [0] * n

    def rec(k, rem, srem):
        if k == n:
            if not any(rem) and not any(srem):
                out.append(tuple(y))
                if len(out) > cap:
                    raise CapExceeded("diophantine fiber", cap, len(out))
            return
        col = cols[k]
        scol = scols[k]
        v = 0
        r, s = rem, srem
        while True:
            y[k] = v
            rec(k + 1, r, s)
            r = tuple(a - b for a, b in zip(r, col))
            if any(a < 0 for a in r):
                break
            s = tuple(a - b for a, b in zip(s, scol))
            v += 1
        y[k] = 0

    rec(0, tuple(target_bound), tuple(target_eq))
    return out


def enumerate_elementary(A, g=None, max_reactants: int = 2, cap: int = 1_000_000):
    """Solve ``A y = A r`` over ``y >= 0`` for every reactant multiset ``r``.

    Parameters
    ----------
    A : BalanceMatrix or array_like
    g : Grading, optional
        Positive grading orthogonal to ``ker(A)``; used only to bound the
        search.  Defaults to :func:`find_positive_grading`.
    max_reactants : int
        Largest ``|r|`` considered.

    Returns
    -------
    ElementaryEnumeration
    """
    from .grading import find_positive_grading

    rows = A.rows if isinstance(A, BalanceMatrix) else np.atleast_2d(np.asarray(A, dtype=np.int64))
    n = rows.shape[1]
    g = as_grading(g) if g is not None else find_positive_grading(rows)
    nonneg = [r for r in rows if (r >= 0).all()]
    signed = [r for r in rows if not (r >= 0).all()]
    bounds = np.array(nonneg + [np.asarray(g.primary)], dtype=np.int64)
    signed = np.array(signed, dtype=np.int64).reshape(len(signed), n)
    systems = {}
    for r in reactant_multisets(n, max_reactants):
        rv = np.asarray(r, dtype=np.int64)
        sols = _solve_fiber(rows, bounds, bounds @ rv, signed @ rv, signed, cap)
        systems[r] = [tuple(a - b for a, b in zip(y, r)) for y in sols if y != r]
    return ElementaryEnumeration(systems, n)


def canonical_sign(v):
    """``v`` or ``-v``, whichever has a positive first nonzero entry."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    raise ValueError("zero vector has no canonical sign")


def partition_transitions(reactions, species=None, grading=None) -> TransitionSet:
    """Split reactions into reversible pairs and irreversible leftovers.

    ``d`` is reversible iff ``-d`` is also listed; each such pair is stored
    once under :func:`canonical_sign`.  Output lists are sorted.
    """
    rs = [tuple(int(x) for x in d) for d in reactions]
    if any(not any(d) for d in rs):
        raise ValueError("zero vector in reaction list")
    pool = set(rs)
    U = sorted({canonical_sign(d) for d in pool if tuple(-x for x in d) in pool})
    D = sorted(d for d in pool if tuple(-x for x in d) not in pool)
    n = len(rs[0]) if rs else (len(species) if species is not None else 0)
    if species is None:
        species = [f"x{k + 1}" for k in range(n)]
    return TransitionSet(U, D, list(species), grading)


def encode_overall(initial, final):
    """Reaction vector ``final - initial``."""
    if len(initial) != len(final):
        raise DimensionMismatch("states have different lengths")
    return tuple(int(b) - int(a) for a, b in zip(initial, final))
