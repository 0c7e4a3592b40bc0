"""Reachability, path enumeration and essential reactions on a cluster graph."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field

from .algebra import GroebnerBasis, as_exponent
from .cluster import ClusterGraph
from .exceptions import MissingNode, NotConnected
from .grading import as_grading, fiber_enumerate


@dataclass
class PathQueryResult:
    """Answer to a reachability or path enumeration query.

    Paths are lists of :class:`~clusternet.cluster.Arc`; the empty list is
    the path from a cluster to itself.
    """

    connected: bool
    source: tuple
    target: tuple
    shortest_path: list | None = None
    paths: list | None = None
    truncated: bool = False
    meta: dict = field(default_factory=dict)


def _endpoints(graph: ClusterGraph, s, t, basis: GroebnerBasis | None = None):
    basis = basis if basis is not None else graph.basis
    if basis is None:
        raise ValueError("a Gröbner basis is needed to map states onto clusters")
    u = basis.normal_form(s)
    w = basis.normal_form(t)
    nodes = set(graph.nodes)
    if u not in nodes:
        raise MissingNode(f"cluster of {tuple(s)} (representative {u}) is not in the graph")
    return u, w, nodes


def connected(graph: ClusterGraph, s, t, basis: GroebnerBasis | None = None,
              weights=None) -> PathQueryResult:
    """Decide whether ``t`` is reachable from ``s`` and return a shortest arc sequence.

    Without ``weights`` all arcs cost 1 (breadth-first search).  ``weights``
    maps an arc label to a nonnegative cost, either as a dict or a callable,
    and switches to Dijkstra's algorithm.
    """
    u, w, nodes = _endpoints(graph, s, t, basis)
    if u == w:
        return PathQueryResult(True, u, w, shortest_path=[])
    if w not in nodes:
        return PathQueryResult(False, u, w)
    if weights is None:
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == w:
                break
            for a in graph.out_arcs(x):
                if a.target not in prev:
                    prev[a.target] = a
                    queue.append(a.target)
    else:
        cost = weights if callable(weights) else (lambda label: weights[tuple(label)])
        dist = {u: 0}
        prev = {u: None}
        heap = [(0, u)]
        done = set()
        while heap:
            dx, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            if x == w:
                break
            for a in graph.out_arcs(x):
                c = cost(a.label)
                if c < 0:
                    raise ValueError(f"negative weight {c} on {a.label}")
                nd = dx + c
                if a.target not in dist or nd < dist[a.target]:
                    dist[a.target] = nd
                    prev[a.target] = a
                    heapq.heappush(heap, (nd, a.target))
    if w not in prev:
        return PathQueryResult(False, u, w)
    path = []
    x = w
    while prev[x] is not None:
        a = prev[x]
        path.append(a)
        x = a.source
    path.reverse()
    return PathQueryResult(True, u, w, shortest_path=path)


def enumerate_paths(graph: ClusterGraph, s, t, max_paths: int | None = 10_000,
                    basis: GroebnerBasis | None = None) -> PathQueryResult:
    """All simple labelled paths from the cluster of ``s`` to the cluster of ``t``.

    Parallel arcs with different labels give different paths.  Clusters are
    never revisited, so the answer is finite.  Enumeration stops after
    ``max_paths`` paths and sets ``truncated``.
    """
    u, w, nodes = _endpoints(graph, s, t, basis)
    if u == w:
        return PathQueryResult(True, u, w, shortest_path=[], paths=[[]])
    paths = []
    truncated = False
    if w in nodes:
        on_path = {u}
        stack = [(u, iter(graph.out_arcs(u)))]
        trail = []
        while stack:
            x, it = stack[-1]
            a = next(it, None)
            if a is None:
                stack.pop()
                on_path.discard(x)
                if trail:
                    trail.pop()
                continue
            if a.target in on_path:
                continue
            if a.target == w:
                if max_paths is not None and len(paths) >= max_paths:
                    truncated = True
                    break
                paths.append(trail + [a])
                continue
            trail.append(a)
            on_path.add(a.target)
            stack.append((a.target, iter(graph.out_arcs(a.target))))
    shortest = min(paths, key=len) if paths else None
    return PathQueryResult(bool(paths), u, w, shortest_path=shortest, paths=paths,
                           truncated=truncated)


def _reaches(graph, u, w, skip):
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == w:
            return True
        for a in graph.out_arcs(x):
            if (a.source, a.target, a.label) in skip or a.target in seen:
                continue
            seen.add(a.target)
            queue.append(a.target)
    return False


def essential_arcs(graph: ClusterGraph, s, t, basis: GroebnerBasis | None = None) -> list:
    """Labelled arcs lying on every path from the cluster of ``s`` to that of ``t``.

    Each entry is ``(arc, is_unique_label)``; the flag says the arc's
    endpoints are joined by no other label.  An arc is essential iff removing
    it disconnects the query.
    """
    u, w, _ = _endpoints(graph, s, t, basis)
    if not _reaches(graph, u, w, frozenset()):
        raise NotConnected(f"{u} does not reach {w}")
    if u == w:
        return []
    labels = {}
    for a in graph.arcs:
        labels.setdefault((a.source, a.target), []).append(a)
    sp = connected(graph, s, t, basis).shortest_path
    out = []
    # an essential arc lies on every path, in particular on a shortest one
    for a in sp:
        if not _reaches(graph, u, w, {(a.source, a.target, a.label)}):
            out.append((a, len(labels[(a.source, a.target)]) == 1))
    return out


def cluster_count_bound(G: GroebnerBasis, g, s, cap: int = 1_000_000) -> int:
    """Number of standard monomials sharing the degree of ``s``.

    This is the coefficient of ``z^deg(s)`` in the Hilbert-Poincaré series of
    ``J_U`` and bounds the number of clusters of that degree.
    """
    g = as_grading(g)
    s = as_exponent(s, g.n)
    return sum(1 for x in fiber_enumerate(g, g.degree(s), cap) if G.is_standard(x))
