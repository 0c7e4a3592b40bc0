"""Exponent arithmetic, term orders and Gröbner bases of pure-difference binomial ideals.

Every polynomial handled here has the form ``x^a - x^b``, so reduction maps
monomials to monomials and no coefficient arithmetic is ever needed.  Exponent
vectors are plain tuples of Python ints (arbitrary precision, no wraparound).
"""

from __future__ import annotations

import heapq
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, NamedTuple

import numpy as np

from .exceptions import ContractError, DimensionMismatch

Exponent = tuple  # tuple[int, ...], every entry >= 0


class Cmp(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def as_exponent(v, n=None) -> Exponent:
    """Convert ``v`` to a tuple of nonnegative ints, checking its length against ``n``."""
    t = tuple(int(x) for x in v)
    if n is not None and len(t) != n:
        raise DimensionMismatch(f"expected length {n}, got {len(t)}")
    if any(x < 0 for x in t):
        raise ValueError(f"exponent has a negative entry: {t}")
    return t


def as_vector(v, n=None) -> tuple:
    """Like :func:`as_exponent` but allows negative entries."""
    t = tuple(int(x) for x in v)
    if n is not None and len(t) != n:
        raise DimensionMismatch(f"expected length {n}, got {len(t)}")
    return t


def positive_part(v) -> Exponent:
    return tuple(x if x > 0 else 0 for x in v)


def negative_part(v) -> Exponent:
    return tuple(-x if x < 0 else 0 for x in v)


def divides(a, b) -> bool:
    """True iff ``x^a`` divides ``x^b``."""
    return all(x <= y for x, y in zip(a, b))


def _mask(a) -> int:
    m = 0
    for k, x in enumerate(a):
        if x:
            m |= 1 << k
    return m


def _weights(g) -> tuple:
    """Primary (strictly positive) weight row of a grading-like argument."""
    rows = getattr(g, "weights", None)
    if rows is not None:
        return tuple(rows[0])
    arr = np.asarray(g)
    if arr.ndim == 2:
        arr = arr[0]
    return tuple(int(x) for x in arr)


# --------------------------------------------------------------------------
# term orders


@dataclass(frozen=True)
class TermOrder:
    """Weight order refined by degree reverse lexicographic comparison.

    ``a`` is larger than ``b`` if ``weight . a > weight . b``; on a tie, ``a``
    is larger iff the last nonzero entry of ``(a - b)`` read in the order
    ``tiebreak_perm`` is negative.  With ``tiebreak_perm`` the identity this
    is plain degrevlex with ``x1 > x2 > ... > xn``.
    """

    weight: tuple
    tiebreak_perm: tuple

    def __post_init__(self):
        w = tuple(int(x) for x in self.weight)
        p = tuple(int(x) for x in self.tiebreak_perm)
        if any(x < 1 for x in w):
            raise ValueError(f"term order weights must be >= 1, got {w}")
        if sorted(p) != list(range(len(w))):
            raise ValueError(f"tiebreak_perm is not a permutation of range({len(w)}): {p}")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "tiebreak_perm", p)
        object.__setattr__(self, "_rev", tuple(reversed(p)))

    @classmethod
    def degrevlex(cls, n, weight=None):
        return cls(tuple(weight) if weight is not None else (1,) * n, tuple(range(n)))

    @property
    def n(self):
        return len(self.weight)

    def key(self, a):
        """Sort key realising the order: ``key(a) < key(b)`` iff ``a < b``."""
        return (sum(w * x for w, x in zip(self.weight, a)), tuple(-a[k] for k in self._rev))

    def compare(self, a, b) -> Cmp:
        if len(a) != self.n or len(b) != self.n:
            raise DimensionMismatch(f"order has {self.n} variables, got {len(a)} and {len(b)}")
        ka, kb = self.key(a), self.key(b)
        if ka == kb:
            return Cmp.EQUAL
        return Cmp.GREATER if ka > kb else Cmp.LESS

    def to_dict(self):
        return {"weight": list(self.weight), "tiebreak_perm": list(self.tiebreak_perm)}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(d["weight"]), tuple(d["tiebreak_perm"]))


def compare(order: TermOrder, a, b) -> Cmp:
    return order.compare(a, b)


def make_max_order(g, j: int) -> TermOrder:
    """Term order whose normal forms maximise coordinate ``j`` on ``g``-homogeneous fibers.

    The weight is ``2 g - e_j``; on a fiber with fixed ``g . x`` minimising it
    is the same as maximising ``x_j``.  Ties fall back to degrevlex with
    ``x_j`` as the cheapest variable.
    """
    w = _weights(g)
    if any(x < 1 for x in w):
        raise ValueError(f"grading must be strictly positive, got {w}")
    n = len(w)
    if not 0 <= j < n:
        raise IndexError(f"variable index {j} out of range for {n} variables")
    weight = tuple(2 * x - (k == j) for k, x in enumerate(w))
    perm = tuple(k for k in range(n) if k != j) + (j,)
    return TermOrder(weight, perm)


# --------------------------------------------------------------------------
# binomials


class Binomial(NamedTuple):
    """The pure difference ``x^head - x^tail`` with ``tail < head``."""

    head: Exponent
    tail: Exponent

    def as_move(self):
        """Signed vector ``head - tail``."""
        return tuple(a - b for a, b in zip(self.head, self.tail))


def orient(a, b, order: TermOrder):
    """Return ``x^a - x^b`` as a :class:`Binomial` under ``order``, or None if ``a == b``."""
    ka, kb = order.key(a), order.key(b)
    if ka == kb:
        return None
    return Binomial(a, b) if ka > kb else Binomial(b, a)


def binomial_from_move(u, order: TermOrder):
    """Binomial ``x^{u+} - x^{u-}`` of a signed move, oriented under ``order``."""
    return orient(positive_part(u), negative_part(u), order)


def spair(f: Binomial, g: Binomial, order: TermOrder):
    """S-binomial of ``f`` and ``g``, oriented; None if it vanishes."""
    if len(f.head) != len(g.head):
        raise DimensionMismatch("binomials live in different rings")
    lcm = tuple(max(a, b) for a, b in zip(f.head, g.head))
    m1 = tuple(l - h + t for l, h, t in zip(lcm, f.head, f.tail))
    m2 = tuple(l - h + t for l, h, t in zip(lcm, g.head, g.tail))
    return orient(m1, m2, order)


def _reduce(m, reducers):
    """Rewrite ``m`` with the first applicable reducer until none applies.

    ``reducers`` is a sequence of ``(head, tail, head_mask)``.
    """
    msk = _mask(m)
    while True:
        for h, t, hm in reducers:
            if hm & ~msk == 0 and all(x >= y for x, y in zip(m, h)):
                m = tuple(x - y + z for x, y, z in zip(m, h, t))
                msk = _mask(m)
                break
        else:
            return m


# --------------------------------------------------------------------------
# Gröbner bases


class GroebnerBasis:
    """Reduced Gröbner basis of a pure-difference binomial ideal.

    Elements are kept sorted ascending by head.  Instances are immutable.
    """

    __slots__ = ("order", "elements", "_reducers")

    def __init__(self, order: TermOrder, elements: Iterable[Binomial]):
        els = sorted((Binomial(tuple(b[0]), tuple(b[1])) for b in elements),
                     key=lambda b: order.key(b.head))
        self.order = order
        self.elements = tuple(els)
        # descending, so the first applicable reducer has the largest head
        self._reducers = [(b.head, b.tail, _mask(b.head)) for b in reversed(els)]

    @property
    def n(self):
        return self.order.n

    @property
    def heads(self):
        return [b.head for b in self.elements]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return (isinstance(other, GroebnerBasis) and self.order == other.order
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.order, self.elements))

    def __repr__(self):
        return f"GroebnerBasis({len(self)} elements, order={self.order})"

    def normal_form(self, m) -> Exponent:
        m = as_exponent(m, self.n)
        return _reduce(m, self._reducers)

    def is_standard(self, m) -> bool:
        """True iff no basis head divides ``m``."""
        msk = _mask(m)
        return not any(hm & ~msk == 0 and divides(h, m) for h, _, hm in self._reducers)

    def to_dict(self):
        return {
            "order": self.order.to_dict(),
            "elements": [[list(b.head), list(b.tail)] for b in self.elements],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(TermOrder.from_dict(d["order"]),
                   [Binomial(tuple(h), tuple(t)) for h, t in d["elements"]])


def normal_form(m, G: GroebnerBasis) -> Exponent:
    return G.normal_form(m)


def is_connected(y, z, G: GroebnerBasis) -> bool:
    """Decide whether two states lie in the same cluster, given a basis of ``J_U``."""
    return G.normal_form(y) == G.normal_form(z)


def _coerce_generators(generators, order):
    out = []
    for g in generators:
        if isinstance(g, Binomial):
            b = orient(g.head, g.tail, order)
        elif len(g) == 2 and not isinstance(g[0], (int, np.integer)):
            b = orient(as_exponent(g[0], order.n), as_exponent(g[1], order.n), order)
        else:
            b = binomial_from_move(as_vector(g, order.n), order)
        if b is not None:
            out.append(b)
    return out


def buchberger(generators, order: TermOrder) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by ``generators``.

    Generators may be :class:`Binomial` objects, ``(a, b)`` exponent pairs, or
    signed move vectors ``u`` (read as ``x^{u+} - x^{u-}``).  Pairs are
    processed smallest lcm first; useless pairs are discarded with the
    Gebauer-Möller criteria.
    """
    gens = _coerce_generators(generators, order)
    gens.sort(key=lambda b: order.key(b.head))
    key = order.key

    polys = []   # (head, tail, head_mask) by index
    active = []  # indices currently in the basis
    pairs = []   # heap of (key(lcm), i, j, lcm)

    def reducers():
        return [polys[k] for k in active]

    def lcm_of(a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    def update(h_idx):
        h, _, hm = polys[h_idx]
        cands = []
        for k in active:
            g = polys[k][0]
            cands.append((k, lcm_of(h, g), hm & polys[k][2] == 0))
        # chain criterion among the new pairs
        kept = []
        for pos, (k, l, coprime) in enumerate(cands):
            if coprime:
                kept.append((k, l, coprime))
                continue
            dominated = False
            for k2, l2, _ in cands[pos + 1:]:
                if divides(l2, l):
                    dominated = True
                    break
            if not dominated:
                for k2, l2, _ in kept:
                    if divides(l2, l):
                        dominated = True
                        break
            if not dominated:
                kept.append((k, l, coprime))
        new_pairs = [(k, l) for k, l, coprime in kept if not coprime]
        # drop old pairs made redundant by h
        old = []
        for entry in pairs:
            _, i, j, l = entry
            if divides(h, l):
                li = lcm_of(polys[i][0], h)
                lj = lcm_of(polys[j][0], h)
                if li != l and lj != l:
                    continue
            old.append(entry)
        pairs[:] = old
        heapq.heapify(pairs)
        for k, l in new_pairs:
            heapq.heappush(pairs, (key(l), k, h_idx, l))
        active[:] = [k for k in active if not divides(h, polys[k][0])]
        active.append(h_idx)

    def add(a, b):
        red = reducers()
        a = _reduce(a, red)
        b = _reduce(b, red)
        bn = orient(a, b, order)
        if bn is None:
            return
        polys.append((bn.head, bn.tail, _mask(bn.head)))
        update(len(polys) - 1)

    for b in gens:
        add(b.head, b.tail)

    while pairs:
        _, i, j, l = heapq.heappop(pairs)
        hi, ti, _ = polys[i]
        hj, tj, _ = polys[j]
        m1 = tuple(x - y + z for x, y, z in zip(l, hi, ti))
        m2 = tuple(x - y + z for x, y, z in zip(l, hj, tj))
        if m1 != m2:
            add(m1, m2)

    # inter-reduce: active heads are already minimal, normalise tails
    red = reducers()
    out = []
    for k in active:
        h, t, _ = polys[k]
        out.append(Binomial(h, _reduce(t, red)))
    return GroebnerBasis(order, out)


# --------------------------------------------------------------------------
# colon ideals


def colon_by_variable(G: GroebnerBasis, i: int, g) -> list:
    """Generators of ``J : x_i`` obtained by dividing basis elements by ``x_i``.

    ``G`` must be a basis under ``make_max_order(g, i)``; otherwise a basis
    for that order is recomputed first.  Each binomial with both terms
    divisible by ``x_i`` is divided once.
    """
    order = make_max_order(g, i)
    if G.order != order:
        G = buchberger(G.elements, order)
    out = []
    for h, t in G.elements:
        if h[i] >= 1 and t[i] >= 1:
            h = h[:i] + (h[i] - 1,) + h[i + 1:]
            t = t[:i] + (t[i] - 1,) + t[i + 1:]
        out.append(Binomial(h, t))
    return out


def colon_by_monomial(G: GroebnerBasis, dbar, g) -> list:
    """Generators of ``J : x^dbar`` via iterated single-variable colons."""
    dbar = as_exponent(dbar, G.n)
    gens = list(G.elements)
    basis = G
    for i, times in enumerate(dbar):
        for _ in range(times):
            order = make_max_order(g, i)
            if basis is None or basis.order != order:
                basis = buchberger(gens, order)
            gens = colon_by_variable(basis, i, g)
            basis = None
    return gens


# --------------------------------------------------------------------------
# basis cache


def demanded_keys(D, n):
    """Cache keys ``(dbar, j)`` needed to run the connectivity test on every move in ``D``.

    Support of ``d-`` is visited in ascending order, so the colon monomial of
    step ``k`` is the accumulated negative part of the earlier steps.
    """
    keys = []
    seen = set()
    for d in D:
        neg = negative_part(d)
        acc = [0] * n
        for s in (k for k in range(n) if neg[k] > 0):
            key = (tuple(acc), s)
            if key not in seen:
                seen.add(key)
                keys.append(key)
            acc[s] += neg[s]
    return keys


def _compute_colon_basis(generators, g, dbar, j, base_order):
    base = buchberger(generators, base_order)
    V = colon_by_monomial(base, dbar, g)
    return buchberger(V, make_max_order(g, j))


class BasisCache:
    """Gröbner bases of ``J_U`` and of its colon ideals, computed once per key.

    ``colon_basis(dbar, j)`` is a basis of ``J_U : x^dbar`` under
    ``make_max_order(g, j)``.  Lookups are thread safe; missing keys are
    computed on demand under a lock.
    """

    def __init__(self, U, grading, order: TermOrder | None = None):
        self.grading = _weights(grading)
        n = len(self.grading)
        self.U = [as_vector(u, n) for u in U]
        self.order = order if order is not None else default_order(self.grading)
        self.base = buchberger(self.U, self.order)
        self._colon = {}
        self._gens = {}
        self._lock = threading.RLock()

    @property
    def n(self):
        return len(self.grading)

    def keys(self):
        return sorted(self._colon)

    def colon_generators(self, dbar):
        dbar = as_exponent(dbar, self.n)
        with self._lock:
            if dbar not in self._gens:
                self._gens[dbar] = colon_by_monomial(self.base, dbar, self.grading)
            return self._gens[dbar]

    def colon_basis(self, dbar, j) -> GroebnerBasis:
        dbar = as_exponent(dbar, self.n)
        key = (dbar, j)
        with self._lock:
            G = self._colon.get(key)
            if G is None:
                if any(dbar):
                    gens = self.colon_generators(dbar)
                else:
                    gens = self.base.elements
                G = buchberger(gens, make_max_order(self.grading, j))
                self._colon[key] = G
            return G

    def populate(self, D, threads: int = 1):
        """Precompute every basis the connectivity test needs for the moves in ``D``."""
        keys = [k for k in demanded_keys(D, self.n) if k not in self._colon]
        if threads > 1 and len(keys) > 1:
            gens = [(b.head, b.tail) for b in self.base.elements]
            with ProcessPoolExecutor(max_workers=threads) as ex:
                futs = [ex.submit(_compute_colon_basis, gens, self.grading, dbar, j, self.order)
                        for dbar, j in keys]
                results = [f.result() for f in futs]
            with self._lock:
                for k, G in zip(keys, results):
                    self._colon.setdefault(k, G)
        else:
            for dbar, j in keys:
                self.colon_basis(dbar, j)
        return self


def default_order(g) -> TermOrder:
    """Grading-weighted degrevlex, the order used for cluster representatives."""
    w = _weights(g)
    return TermOrder(w, tuple(range(len(w))))


def check_contract(cond, message):
    if not cond:
        raise ContractError(message)
