"""Command line interface.

Exit codes: 0 success / yes, 1 a negative answer (not equal, not connected,
verification mismatch), 2 usage, I/O or parse errors.  Errors are reported on
standard error as one JSON line.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import __version__
from .algebra import BasisCache, buchberger, default_order
from .analysis import cluster_count_bound, connected, enumerate_paths, essential_arcs
from .cluster import cgr
from .exceptions import ClusterNetError, NotConnected
from .grading import check_homogeneous, find_positive_grading
from .io import (
    Model,
    dumps,
    format_reaction,
    format_state,
    graph_to_csv,
    graph_to_dot,
    parse_state,
    read_graph,
    read_matrix,
    read_model,
    write_graph,
    write_model,
)
from .oracle import explore, oracle_cluster_graph, oracle_clusters
from .reactions import enumerate_elementary, partition_transitions

log = logging.getLogger("clusternet")

THREADS_ENV = "CLUSTERNET_THREADS"


class UsageError(ClusterNetError):
    pass


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help=f"worker processes (default: ${THREADS_ENV} or 1)")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--format", choices=["json", "csv", "dot"], default=argparse.SUPPRESS)
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    return p


def build_parser():
    common = _common()
    p = argparse.ArgumentParser(prog="clusternet", parents=[common],
                                description="Cluster graphs of integer transition systems.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reactions", parents=[common]).add_subparsers(dest="action", required=True)
    gen = r.add_parser("gen", parents=[common], help="enumerate elementary reactions")
    gen.add_argument("--matrix", required=True)
    gen.add_argument("--max-reactants", type=int, default=2)
    gen.add_argument("-o", "--output", required=True)
    gen.set_defaults(func=cmd_reactions_gen)

    gr = sub.add_parser("grading", parents=[common])
    gr.add_argument("action", choices=["check", "find"])
    gr.add_argument("--model", required=True)
    gr.set_defaults(func=cmd_grading)

    cl = sub.add_parser("cluster", parents=[common]).add_subparsers(dest="action", required=True)
    eq = cl.add_parser("eq", parents=[common], help="are two states in the same cluster")
    eq.add_argument("--model", required=True)
    eq.add_argument("--state", action="append", required=True)
    eq.set_defaults(func=cmd_cluster_eq)
    rp = cl.add_parser("repr", parents=[common], help="canonical cluster representative")
    rp.add_argument("--model", required=True)
    rp.add_argument("--state", required=True)
    rp.set_defaults(func=cmd_cluster_repr)

    g = sub.add_parser("graph", parents=[common]).add_subparsers(dest="action", required=True)
    b = g.add_parser("build", parents=[common], help="reconstruct the reachable cluster graph")
    b.add_argument("--model", required=True)
    b.add_argument("--initial", action="append", required=True)
    b.add_argument("--exhaustive", action="store_true")
    b.add_argument("--node-cap", type=int, default=100_000)
    b.add_argument("--arc-cap", type=int, default=1_000_000)
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--dot")
    b.set_defaults(func=cmd_graph_build)

    for name, func, help_ in [("connect", cmd_connect, "is the target reachable"),
                              ("paths", cmd_paths, "enumerate simple cluster paths"),
                              ("essential", cmd_essential, "arcs on every path")]:
        q = sub.add_parser(name, parents=[common], help=help_)
        q.add_argument("--graph", required=True)
        q.add_argument("--from", dest="source", required=True)
        q.add_argument("--to", dest="target", required=True)
        if name == "paths":
            q.add_argument("--max-paths", type=int, default=10_000)
        q.set_defaults(func=func)

    bd = sub.add_parser("bound", parents=[common], help="standard monomials of the state's degree")
    bd.add_argument("--model", required=True)
    bd.add_argument("--state", required=True)
    bd.add_argument("--cap", type=int, default=1_000_000)
    bd.set_defaults(func=cmd_bound)

    vf = sub.add_parser("verify", parents=[common], help="cross-check against brute force")
    vf.add_argument("--model", required=True)
    vf.add_argument("--initial", action="append", required=True)
    vf.add_argument("--state-cap", type=int, default=100_000)
    vf.set_defaults(func=cmd_verify)
    return p


def _threads(args):
    t = getattr(args, "threads", None)
    if t is None:
        t = int(os.environ.get(THREADS_ENV, "1") or 1)
    return max(1, t)


def _fmt(args, default="json"):
    return getattr(args, "format", default)


def _out(text):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load(path):
    """Model with transitions and a grading, deriving whichever is missing."""
    model = read_model(path)
    grading = model.grading
    if grading is None:
        if model.matrix is None:
            raise UsageError(f"{path}: model has neither a grading nor a balance matrix")
        grading = find_positive_grading(model.matrix.rows)
    ts = model.transitions
    if ts is None:
        if model.matrix is None:
            raise UsageError(f"{path}: model has neither transitions nor a balance matrix")
        en = enumerate_elementary(model.matrix, grading)
        ts = partition_transitions(en.distinct, model.species, grading)
    ts.grading = grading
    if not check_homogeneous(ts.moves(), grading):
        raise UsageError(f"{path}: transitions are not homogeneous under the grading")
    return model, ts, grading


def cmd_reactions_gen(args):
    A = read_matrix(args.matrix)
    g = find_positive_grading(A.rows)
    t0 = time.perf_counter()
    en = enumerate_elementary(A, g, max_reactants=args.max_reactants)
    ts = partition_transitions(en.distinct, A.species, g)
    log.info("enumeration took %.2fs", time.perf_counter() - t0)
    write_model(Model(A.species, ts, A, g), args.output)
    c = en.counts()
    _out(f"systems: {c['systems']}\n"
         f"solutions (per-system instances): {c['instances']}\n"
         f"solutions (distinct vectors): {c['distinct']}\n"
         f"reversible pairs: {len(ts.U)}\n"
         f"irreversible: {len(ts.D)}")
    return 0


def cmd_grading(args):
    model = read_model(args.model)
    if args.action == "find":
        if model.matrix is None:
            raise UsageError("grading find needs a balance matrix in the model")
        g = find_positive_grading(model.matrix.rows)
        _out(" ".join(map(str, g.primary)))
        return 0
    if model.grading is None or model.transitions is None:
        raise UsageError("grading check needs a grading and transitions in the model")
    ok = check_homogeneous(model.transitions.moves(), model.grading)
    _out("homogeneous" if ok else "not homogeneous")
    return 0 if ok else 1


def _basis(ts, grading):
    return buchberger(ts.U, default_order(grading.primary))


def cmd_cluster_eq(args):
    if len(args.state) != 2:
        raise UsageError("cluster eq takes exactly two --state options")
    model, ts, g = _load(args.model)
    a, b = (parse_state(e, model.species) for e in args.state)
    G = _basis(ts, g)
    same = G.normal_form(a) == G.normal_form(b)
    _out("equal" if same else "different")
    return 0 if same else 1


def cmd_cluster_repr(args):
    model, ts, g = _load(args.model)
    x = parse_state(args.state, model.species)
    r = _basis(ts, g).normal_form(x)
    if _fmt(args) == "json":
        _out(json.dumps({"rep": list(r), "label": format_state(r, model.species)}))
    else:
        _out(format_state(r, model.species))
    return 0


def cmd_graph_build(args):
    model, ts, g = _load(args.model)
    S = [parse_state(e, model.species) for e in args.initial]
    t0 = time.perf_counter()
    cache = BasisCache(ts.U, g)
    if not args.exhaustive:
        cache.populate(ts.D, threads=_threads(args))
    t1 = time.perf_counter()
    graph = cgr(ts.U, ts.D, S, cache, exhaustive=args.exhaustive, node_cap=args.node_cap,
                arc_cap=args.arc_cap, species=model.species)
    t2 = time.perf_counter()
    log.info("bases %.2fs (%d colon bases, |G_U| = %d), graph %.2fs",
             t1 - t0, len(cache.keys()), len(cache.base), t2 - t1)
    fmt = _fmt(args)
    if fmt == "json":
        write_graph(graph, args.output)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(graph_to_dot(graph) if fmt == "dot" else graph_to_csv(graph))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(graph_to_dot(graph))
    _out(f"nodes: {len(graph.nodes)}\narcs: {len(graph.arcs)}\nbasis: {len(cache.base)}")
    return 0


def _query(args):
    graph = read_graph(args.graph)
    s = parse_state(args.source, graph.species)
    t = parse_state(args.target, graph.species)
    return graph, s, t


def _path_text(path, species):
    return " ; ".join(format_reaction(a.label, species) for a in path) or "(empty)"


def _path_json(path):
    return [{"source": list(a.source), "target": list(a.target), "label": list(a.label)}
            for a in path]


def cmd_connect(args):
    graph, s, t = _query(args)
    res = connected(graph, s, t)
    if _fmt(args) == "json":
        _out(json.dumps({"connected": res.connected,
                         "path": _path_json(res.shortest_path) if res.connected else None}))
    else:
        _out("connected" if res.connected else "not connected")
        if res.connected:
            _out(_path_text(res.shortest_path, graph.species))
    return 0 if res.connected else 1


def cmd_paths(args):
    graph, s, t = _query(args)
    res = enumerate_paths(graph, s, t, max_paths=args.max_paths)
    fmt = _fmt(args)
    if fmt == "json":
        _out(json.dumps({"count": len(res.paths), "truncated": res.truncated,
                         "paths": [_path_json(p) for p in res.paths]}))
    else:
        _out("path,step,reaction")
        for k, p in enumerate(res.paths):
            for i, a in enumerate(p):
                _out(f"{k},{i},\"{format_reaction(a.label, graph.species)}\"")
    return 0 if res.connected else 1


def cmd_essential(args):
    graph, s, t = _query(args)
    try:
        ess = essential_arcs(graph, s, t)
    except NotConnected:
        _out(json.dumps({"connected": False}) if _fmt(args) == "json" else "not connected")
        return 1
    if _fmt(args) == "json":
        _out(json.dumps([{"source": list(a.source), "target": list(a.target),
                          "label": list(a.label), "unique_label": u,
                          "reaction": format_reaction(a.label, graph.species)}
                         for a, u in ess], ensure_ascii=False))
    else:
        for a, u in ess:
            _out(f"{format_reaction(a.label, graph.species)}\tunique={str(u).lower()}")
    return 0


def cmd_bound(args):
    model, ts, g = _load(args.model)
    x = parse_state(args.state, model.species)
    _out(str(cluster_count_bound(_basis(ts, g), g, x, cap=args.cap)))
    return 0


def cmd_verify(args):
    model, ts, g = _load(args.model)
    S = [parse_state(e, model.species) for e in args.initial]
    cache = BasisCache(ts.U, g)
    G = cache.base
    sg = explore(ts.U, ts.D, S, cap=args.state_cap)
    problems = []
    clusters = oracle_clusters(sg)
    reps = [{G.normal_form(x) for x in c} for c in clusters]
    if any(len(r) != 1 for r in reps):
        problems.append("a brute-force cluster has several normal forms")
    if len({next(iter(r)) for r in reps}) != len(reps):
        problems.append("two brute-force clusters share a normal form")
    truth = oracle_cluster_graph(sg, cache.order)
    for mode, exhaustive in (("exhaustive", True), ("witness", False)):
        built = cgr(ts.U, ts.D, S, cache, exhaustive=exhaustive)
        if not built.same_structure(truth):
            missing = truth.arc_set() - built.arc_set()
            extra = built.arc_set() - truth.arc_set()
            problems.append(f"{mode} cluster graph differs from brute force: "
                            f"{len(missing)} arcs missing, {len(extra)} extra")
    report = {"states": len(sg.states), "clusters": len(clusters),
              "nodes": len(truth.nodes), "arcs": len(truth.arcs), "problems": problems}
    _out(dumps(report))
    return 1 if problems else 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ClusterNetError, OSError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if hasattr(exc, "offset"):
            err["offset"] = exc.offset
        sys.stderr.write(json.dumps(err, ensure_ascii=False) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
