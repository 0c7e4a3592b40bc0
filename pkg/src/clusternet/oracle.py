"""Brute-force ground truth: explicit state graphs, clusters and cluster graphs.

Nothing here touches Gröbner bases.  Cluster representatives are the
order-minimal members of each explicitly enumerated cluster, which makes the
results directly comparable with normal forms computed by :mod:`algebra`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .algebra import TermOrder, negative_part, positive_part
from .cluster import Arc, ClusterGraph
from .exceptions import CapExceeded


class StateArc(NamedTuple):
    source: tuple
    target: tuple
    move: tuple
    reversible: bool


@dataclass
class StateGraph:
    states: list
    arcs: list
    origin: list


def _as_pairs(moves):
    """Normalise moves to ``(consume, produce)`` exponent pairs.

    A signed vector ``u`` becomes ``(u-, u+)``; a ``(head, tail)`` pair is
    kept, so overlapping supports (colon generators) are handled too.
    """
    out = []
    for m in moves:
        if len(m) == 2 and isinstance(m[0], (tuple, list)):
            out.append((tuple(m[1]), tuple(m[0])))
        else:
            m = tuple(int(v) for v in m)
            out.append((negative_part(m), positive_part(m)))
    return out


def _fire(x, consume, produce):
    if all(a >= b for a, b in zip(x, consume)):
        return tuple(a - b + c for a, b, c in zip(x, consume, produce))
    return None


def explore(U, D, S, cap: int = 100_000) -> StateGraph:
    """Breadth-first closure of ``S`` under ``U``, ``-U`` and ``D``."""
    U = [tuple(int(v) for v in u) for u in U]
    D = [tuple(int(v) for v in d) for d in D]
    upairs = _as_pairs(U)
    dpairs = _as_pairs(D)
    origin = [tuple(int(v) for v in s) for s in S]
    seen = set()
    states = []
    queue = deque()
    for s in origin:
        if s not in seen:
            seen.add(s)
            states.append(s)
            queue.append(s)
    arcs = []
    while queue:
        x = queue.popleft()
        out = []
        for u, (c, p) in zip(U, upairs):
            y = _fire(x, c, p)
            if y is not None:
                out.append(StateArc(x, y, u, True))
            y = _fire(x, p, c)
            if y is not None:
                out.append(StateArc(x, y, tuple(-v for v in u), True))
        for d, (c, p) in zip(D, dpairs):
            y = _fire(x, c, p)
            if y is not None:
                out.append(StateArc(x, y, d, False))
        for a in out:
            arcs.append(a)
            if a.target not in seen:
                seen.add(a.target)
                states.append(a.target)
                queue.append(a.target)
                if len(states) > cap:
                    raise CapExceeded("state graph", cap, len(states))
    return StateGraph(states, arcs, origin)


def component(y, moves, cap: int = 100_000) -> set:
    """States connected to ``y`` by moves used in either direction.

    ``moves`` may mix signed vectors and ``(head, tail)`` pairs.
    """
    pairs = _as_pairs(moves)
    y = tuple(y)
    seen = {y}
    queue = deque([y])
    while queue:
        x = queue.popleft()
        for c, p in pairs:
            for src, dst in ((c, p), (p, c)):
                z = _fire(x, src, dst)
                if z is not None and z not in seen:
                    seen.add(z)
                    queue.append(z)
                    if len(seen) > cap:
                        raise CapExceeded("component", cap, len(seen))
    return seen


def oracle_clusters(graph: StateGraph, U=None) -> list:
    """Connected components of the reversible arcs, as sorted lists of states."""
    parent = {x: x for x in graph.states}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in graph.arcs:
        if a.reversible:
            ra, rb = find(a.source), find(a.target)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for x in graph.states:
        groups.setdefault(find(x), []).append(x)
    return sorted(sorted(v) for v in groups.values())


def oracle_cluster_graph(graph: StateGraph, order: TermOrder, U=None, D=None) -> ClusterGraph:
    """The definitional cluster graph over the explored states.

    An arc ``(rep(x), rep(x + d), d)`` is present whenever some explored
    ``x`` fires ``d`` into a different cluster.
    """
    clusters = oracle_clusters(graph)
    rep_of = {}
    for members in clusters:
        r = min(members, key=order.key)
        for x in members:
            rep_of[x] = r
    nodes = []
    seen = set()
    for x in graph.states:
        r = rep_of[x]
        if r not in seen:
            seen.add(r)
            nodes.append(r)
    arcs = {}
    for a in graph.arcs:
        if a.reversible:
            continue
        u, w = rep_of[a.source], rep_of[a.target]
        if u == w:
            continue
        key = (u, w, a.move)
        if key not in arcs or a.source < arcs[key].witness:
            arcs[key] = Arc(u, w, a.move, a.source)
    initial = [rep_of[s] for s in graph.origin]
    return ClusterGraph(nodes, [arcs[k] for k in sorted(arcs)], initial,
                        meta={"mode": "oracle"})


def reachable(graph: StateGraph, s, t) -> bool:
    """Directed reachability in the explicit state graph."""
    s, t = tuple(s), tuple(t)
    adj = {}
    for a in graph.arcs:
        adj.setdefault(a.source, []).append(a.target)
    seen = {s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        if x == t:
            return True
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return False
