"""Coordinate increment, cluster connectivity test and cluster graph reconstruction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .algebra import (
    BasisCache,
    GroebnerBasis,
    as_exponent,
    as_vector,
    negative_part,
    positive_part,
)
from .exceptions import ArcCapExceeded, CapExceeded, ContractError, NodeCapExceeded


class Arc(NamedTuple):
    source: tuple
    target: tuple
    label: tuple
    witness: tuple  # a member of the source cluster with witness + label in the target cluster


@dataclass
class ClusterGraph:
    """Directed multigraph on canonical cluster representatives.

    ``nodes`` are kept in discovery order; there is one arc per distinct
    ``(source, target, label)``.  ``basis`` is the Gröbner basis whose normal
    forms define the representatives, so queries can map arbitrary states
    onto nodes.
    """

    nodes: list
    arcs: list
    initial: list
    basis: GroebnerBasis | None = None
    species: list | None = None
    grading: tuple | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.nodes[0]) if self.nodes else (self.basis.n if self.basis else 0)

    def representative(self, state):
        if self.basis is None:
            raise ValueError("graph carries no basis; cannot map states to clusters")
        return self.basis.normal_form(state)

    def out_arcs(self, u):
        """Arcs leaving ``u`` sorted by target then label."""
        adj = self._adjacency()
        return adj.get(tuple(u), [])

    def _adjacency(self):
        cached = self.__dict__.get("_adj")
        if cached is None or cached[0] != len(self.arcs):
            adj = {}
            for a in self.arcs:
                adj.setdefault(a.source, []).append(a)
            for v in adj.values():
                v.sort(key=lambda a: (a.target, a.label))
            cached = (len(self.arcs), adj)
            self.__dict__["_adj"] = cached
        return cached[1]

    def arc_set(self):
        return {(a.source, a.target, a.label) for a in self.arcs}

    def same_structure(self, other) -> bool:
        """Equal node sets and equal labelled arc sets (witnesses ignored)."""
        return set(self.nodes) == set(other.nodes) and self.arc_set() == other.arc_set()


def ci(cache: BasisCache, y, d, j: int):
    """Find ``z`` in the cluster of ``y`` with ``z >= d``, raising only coordinate ``j``.

    Requires ``y >= d - d_j e_j``.  Returns None when no cluster member
    reaches ``d_j`` in coordinate ``j``.
    """
    n = cache.n
    y = as_exponent(y, n)
    d = as_exponent(d, n)
    dbar = d[:j] + (0,) + d[j + 1:]
    if any(a < b for a, b in zip(y, dbar)):
        raise ContractError(f"ci: state {y} is not above {dbar}")
    G = cache.colon_basis(dbar, j)
    zbar = G.normal_form(tuple(a - b for a, b in zip(y, dbar)))
    if zbar[j] >= d[j]:
        return tuple(a + b for a, b in zip(zbar, dbar))
    return None


def cct(cache: BasisCache, y, d, verify: bool = False):
    """A member ``z`` of the cluster of ``y`` with ``z + d >= 0``, or None.

    The negative support of ``d`` is handled in ascending index order.  With
    ``verify`` every returned witness is rechecked against the basis of
    ``J_U``.
    """
    n = cache.n
    y = as_exponent(y, n)
    d = as_vector(d, n)
    neg = negative_part(d)
    acc = [0] * n
    z = y
    for s in range(n):
        if not neg[s]:
            continue
        acc[s] = neg[s]
        z = ci(cache, z, acc, s)
        if z is None:
            return None
    if verify:
        if not cache.base.normal_form(z) == cache.base.normal_form(y):
            raise ContractError(f"cct witness {z} left the cluster of {y}")
        if any(a + b < 0 for a, b in zip(z, d)):
            raise ContractError(f"cct witness {z} cannot fire {d}")
    return z


def cluster_members(rep, U, cap: int = 100_000):
    """All states reachable from ``rep`` by reversible moves, in BFS order."""
    rep = tuple(rep)
    moves = []
    for u in U:
        moves.append((positive_part(u), negative_part(u)))
    seen = {rep}
    order = [rep]
    queue = deque([rep])
    while queue:
        x = queue.popleft()
        for a, b in moves:
            for src, dst in ((a, b), (b, a)):
                if all(p >= q for p, q in zip(x, src)):
                    y = tuple(p - q + r for p, q, r in zip(x, src, dst))
                    if y not in seen:
                        seen.add(y)
                        order.append(y)
                        queue.append(y)
                        if len(order) > cap:
                            raise CapExceeded("cluster members", cap, len(order))
    return order


def cgr(U, D, S, cache: BasisCache | None = None, grading=None, *, exhaustive: bool = False,
        node_cap: int = 100_000, arc_cap: int = 1_000_000, member_cap: int = 100_000,
        verify: bool = False, species=None) -> ClusterGraph:
    """Reconstruct the part of the cluster graph reachable from the initial states ``S``.

    Parameters
    ----------
    U, D : sequences of signed vectors
        Reversible and irreversible moves.
    S : sequence of states
    cache : BasisCache, optional
        Built from ``U`` and ``grading`` when omitted.
    exhaustive : bool
        Test every member of each cluster against every move instead of the
        single witness returned by :func:`cct`.  Finds every arc of the
        definitional cluster graph but enumerates whole clusters.

    Returns
    -------
    ClusterGraph
    """
    if cache is None:
        if grading is None:
            raise ValueError("cgr needs a grading or a prepared BasisCache")
        cache = BasisCache(U, grading)
    n = cache.n
    G = cache.base
    D = [as_vector(d, n) for d in D]
    U = [as_vector(u, n) for u in U] if U is not None else cache.U

    nodes = []
    seen = set()
    queue = deque()

    def discover(w):
        if w not in seen:
            seen.add(w)
            nodes.append(w)
            queue.append(w)
            if len(nodes) > node_cap:
                raise NodeCapExceeded(node_cap, len(nodes))

    initial = []
    for s in S:
        r = G.normal_form(s)
        initial.append(r)
        discover(r)

    arcs = []
    arc_keys = set()
    while queue:
        u = queue.popleft()
        members = cluster_members(u, U, member_cap) if exhaustive else None
        for d in D:
            found = []
            if exhaustive:
                hits = {}
                for z in members:
                    t = tuple(a + b for a, b in zip(z, d))
                    if min(t) < 0:
                        continue
                    w = G.normal_form(t)
                    if w != u and w not in hits:
                        hits[w] = z
                found = sorted(hits.items())
            else:
                v = cct(cache, u, d, verify=verify)
                if v is not None:
                    w = G.normal_form(tuple(a + b for a, b in zip(v, d)))
                    if w != u:
                        found = [(w, v)]
            for w, z in found:
                key = (u, w, d)
                if key in arc_keys:
                    continue
                arc_keys.add(key)
                arcs.append(Arc(u, w, d, z))
                if len(arcs) > arc_cap:
                    raise ArcCapExceeded(arc_cap, len(arcs))
                discover(w)

    return ClusterGraph(nodes, arcs, initial, basis=G,
                        species=list(species) if species is not None else None,
                        grading=cache.grading,
                        meta={"mode": "exhaustive" if exhaustive else "witness"})
