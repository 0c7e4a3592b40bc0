"""State expressions, model files, graph files and DOT/CSV rendering.

Model and graph files are JSON with sorted keys so that equal content gives
byte-identical files.  Balance matrices may also be plain text::

    # comment
    A B C            <- species names
    mass: 1 1 2      <- optional "label:" then one integer per species
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field

from .algebra import GroebnerBasis
from .cluster import Arc, ClusterGraph
from .exceptions import ModelError, StateSyntaxError, UnknownSpecies
from .grading import Grading
from .reactions import BalanceMatrix, TransitionSet

GRAPH_FORMAT = "clusternet-graph/1"
MODEL_FORMAT = "clusternet-model/1"

_INT = re.compile(r"[0-9]+\Z")


def parse_state(expr: str, species) -> tuple:
    """Parse ``"2 MnO4- + 6 H+ + 5 H2C2O4"`` into a count vector.

    Terms are separated by a ``+`` standing alone between whitespace, so
    species names may themselves contain ``+``.  A missing coefficient means 1.
    """
    index = {name: k for k, name in enumerate(species)}
    counts = [0] * len(species)
    tokens = [(m.group(), m.start()) for m in re.finditer(r"\S+", expr)]
    if not tokens:
        raise StateSyntaxError("empty state expression", 0)
    pos = 0
    expect_term = True
    while pos < len(tokens):
        tok, off = tokens[pos]
        if not expect_term:
            if tok != "+":
                raise StateSyntaxError(f"expected '+' but found {tok!r}", off)
            pos += 1
            expect_term = True
            continue
        coeff = 1
        if _INT.match(tok):
            coeff = int(tok)
            pos += 1
            if pos == len(tokens):
                raise StateSyntaxError("coefficient without species", off)
            tok, off = tokens[pos]
        if tok == "+":
            raise StateSyntaxError("missing term before '+'", off)
        if tok not in index:
            raise UnknownSpecies(tok, off)
        counts[index[tok]] += coeff
        pos += 1
        expect_term = False
    if expect_term:
        raise StateSyntaxError("expression ends with '+'", tokens[-1][1])
    return tuple(counts)


def format_state(x, species) -> str:
    """Inverse of :func:`parse_state`; the zero state renders as ``"0"``."""
    terms = []
    for k, c in enumerate(x):
        if c == 1:
            terms.append(species[k])
        elif c:
            terms.append(f"{c} {species[k]}")
    return " + ".join(terms) if terms else "0"


def format_reaction(d, species) -> str:
    lhs = format_state([-x if x < 0 else 0 for x in d], species)
    rhs = format_state([x if x > 0 else 0 for x in d], species)
    return f"{lhs} → {rhs}"


def default_species(n):
    return [f"x{k + 1}" for k in range(n)]


# --------------------------------------------------------------------------
# balance matrices


def read_matrix(path) -> BalanceMatrix:
    """Read a balance matrix from JSON (``species``, ``rows``, ``row_labels``) or text."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        return BalanceMatrix(data["rows"], data["species"], list(data.get("row_labels", [])))
    return parse_matrix_text(text)


def parse_matrix_text(text: str) -> BalanceMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise ModelError("matrix text needs a species header and at least one row")
    species = lines[0].split()
    rows, labels = [], []
    for k, ln in enumerate(lines[1:]):
        toks = ln.split()
        label = f"r{k}"
        if toks and toks[0].endswith(":"):
            label = toks[0][:-1]
            toks = toks[1:]
        try:
            row = [int(t) for t in toks]
        except ValueError as exc:
            raise ModelError(f"matrix row {k + 1}: {exc}") from None
        if len(row) != len(species):
            raise ModelError(f"matrix row {k + 1} has {len(row)} entries, expected {len(species)}")
        rows.append(row)
        labels.append(label)
    return BalanceMatrix(rows, species, labels)


def permanganate_matrix() -> BalanceMatrix:
    """The bundled 19-species permanganate/oxalic acid balance matrix."""
    from importlib import resources

    text = resources.files("clusternet.data").joinpath("permanganate.txt").read_text("utf-8")
    return parse_matrix_text(text)


# --------------------------------------------------------------------------
# model files


@dataclass
class Model:
    species: list
    transitions: TransitionSet | None = None
    matrix: BalanceMatrix | None = None
    grading: Grading | None = None
    caps: dict = field(default_factory=dict)

    def __post_init__(self):
        names = list(self.species)
        if len(set(names)) != len(names):
            raise ModelError("species names are not unique")
        for s in names:
            if not s or re.search(r"\s", s):
                raise ModelError(f"invalid species name {s!r}")
        self.species = names

    def to_dict(self):
        d = {"format": MODEL_FORMAT, "species": self.species}
        if self.matrix is not None:
            d["balance_matrix"] = {"rows": self.matrix.rows.tolist(),
                                   "row_labels": list(self.matrix.row_labels)}
        if self.transitions is not None:
            d["transitions"] = {"U": [list(u) for u in self.transitions.U],
                                "D": [list(v) for v in self.transitions.D]}
        if self.grading is not None:
            d["grading"] = self.grading.to_list()
        if self.caps:
            d["caps"] = dict(self.caps)
        return d

    @classmethod
    def from_dict(cls, d):
        species = d.get("species")
        if not species:
            raise ModelError("model has no species list")
        n = len(species)
        grading = Grading(d["grading"]) if d.get("grading") else None
        matrix = None
        if "balance_matrix" in d:
            bm = d["balance_matrix"]
            matrix = BalanceMatrix(bm["rows"], species, list(bm.get("row_labels", [])))
        ts = None
        if "transitions" in d:
            t = d["transitions"]
            for v in list(t.get("U", [])) + list(t.get("D", [])):
                if len(v) != n:
                    raise ModelError(f"transition {v} does not have {n} entries")
            ts = TransitionSet(t.get("U", []), t.get("D", []), species, grading)
        if grading is not None and grading.n != n:
            raise ModelError("grading length does not match species count")
        return cls(species, ts, matrix, grading, dict(d.get("caps", {})))

    def __eq__(self, other):
        return isinstance(other, Model) and self.to_dict() == other.to_dict()


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_model(model: Model, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(model.to_dict()))


def read_model(path) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: {exc}") from None
    return Model.from_dict(data)


# --------------------------------------------------------------------------
# cluster graphs


def graph_to_dict(graph: ClusterGraph) -> dict:
    species = graph.species or default_species(graph.n)
    return {
        "format": GRAPH_FORMAT,
        "species": species,
        "grading": list(graph.grading) if graph.grading is not None else None,
        "basis": graph.basis.to_dict() if graph.basis is not None else None,
        "initial": [list(r) for r in graph.initial],
        "nodes": [{"rep": list(r), "label": format_state(r, species)} for r in graph.nodes],
        "arcs": [{"source": list(a.source), "target": list(a.target), "label": list(a.label),
                  "witness": list(a.witness), "reaction": format_reaction(a.label, species)}
                 for a in graph.arcs],
        "meta": graph.meta,
    }


def graph_from_dict(d: dict) -> ClusterGraph:
    if d.get("format") != GRAPH_FORMAT:
        raise ModelError(f"not a cluster graph file (format {d.get('format')!r})")
    basis = GroebnerBasis.from_dict(d["basis"]) if d.get("basis") else None
    return ClusterGraph(
        nodes=[tuple(x["rep"]) for x in d["nodes"]],
        arcs=[Arc(tuple(a["source"]), tuple(a["target"]), tuple(a["label"]), tuple(a["witness"]))
              for a in d["arcs"]],
        initial=[tuple(r) for r in d["initial"]],
        basis=basis,
        species=list(d["species"]),
        grading=tuple(d["grading"]) if d.get("grading") else None,
        meta=dict(d.get("meta", {})),
    )


def write_graph(graph: ClusterGraph, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(graph_to_dict(graph)))


def read_graph(path) -> ClusterGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            return graph_from_dict(json.load(fh))
    except (json.JSONDecodeError, KeyError) as exc:
        raise ModelError(f"{path}: {exc}") from None


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(graph: ClusterGraph) -> str:
    """DOT digraph: nodes ``c0, c1, ...`` in discovery order, one edge per label."""
    species = graph.species or default_species(graph.n)
    ids = {r: f"c{k}" for k, r in enumerate(graph.nodes)}
    initial = set(graph.initial)
    out = ["digraph cluster_graph {"]
    for r in graph.nodes:
        attrs = f"label={_dot_quote(format_state(r, species))}"
        if r in initial:
            attrs += ", shape=doublecircle"
        out.append(f"  {ids[r]} [{attrs}];")
    for a in graph.arcs:
        out.append(f"  {ids[a.source]} -> {ids[a.target]} "
                   f"[label={_dot_quote(format_reaction(a.label, species))}];")
    out.append("}")
    return "\n".join(out) + "\n"


def graph_to_csv(graph: ClusterGraph) -> str:
    species = graph.species or default_species(graph.n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "target", "reaction", "label"])
    for a in graph.arcs:
        w.writerow([format_state(a.source, species), format_state(a.target, species),
                    format_reaction(a.label, species), " ".join(map(str, a.label))])
    return buf.getvalue()
