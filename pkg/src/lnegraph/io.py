"""Graph files and value formatting.

Graph files are JSON::

    {"version": 1,
     "vertices": [{"id": "v1", "genus": 0, "self_intersection": -3}, ...],
     "edges": [["v1", "w2"], ...]}

Edge ids are implied by position (``e0``, ``e1``, ...).
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import GraphValidationError
from .graph import Edge, Problem, Vertex, WeightedGraph, validate_graph

SCHEMA_VERSION = 1


def fmt_rational(x) -> str:
    """Render an exact number as ``"n"`` or ``"p/q"`` in lowest terms."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def parse_graph(data) -> WeightedGraph:
    """Build a graph from a decoded GraphFile, raising on any schema or
    validation problem (all problems are reported at once)."""
    problems: list[Problem] = []
    if not isinstance(data, dict):
        raise GraphValidationError([Problem("schema", "file", "top level must be an object")])
    if data.get("version") != SCHEMA_VERSION:
        problems.append(Problem("schema", "version", f"unsupported version {data.get('version')!r}"))
    raw_vertices = data.get("vertices")
    raw_edges = data.get("edges", [])
    if not isinstance(raw_vertices, list):
        problems.append(Problem("schema", "vertices", "missing or not a list"))
        raw_vertices = []
    if not isinstance(raw_edges, list):
        problems.append(Problem("schema", "edges", "not a list"))
        raw_edges = []

    vertices = []
    for k, rv in enumerate(raw_vertices):
        if not isinstance(rv, dict):
            problems.append(Problem("schema", f"vertices[{k}]", "not an object"))
            continue
        vid, genus, si = rv.get("id"), rv.get("genus"), rv.get("self_intersection")
        if not isinstance(vid, str):
            problems.append(Problem("schema", f"vertices[{k}]", "id must be a string"))
            continue
        if not _is_int(genus) or not _is_int(si):
            problems.append(Problem("schema", vid, "genus and self_intersection must be integers"))
            continue
        vertices.append(Vertex(vid, genus, si))

    edges = []
    for k, re_ in enumerate(raw_edges):
        if (not isinstance(re_, list) or len(re_) != 2
                or not all(isinstance(x, str) for x in re_)):
            problems.append(Problem("schema", f"e{k}", "edge must be a pair of vertex ids"))
            continue
        edges.append(Edge(f"e{k}", re_[0], re_[1]))

    G = WeightedGraph(tuple(vertices), tuple(edges))
    if problems:
        raise GraphValidationError(problems)
    return G


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def load_graph(path, validate: bool = True) -> WeightedGraph:
    """Read a graph file; with ``validate`` the graph must pass
    :func:`~lnegraph.graph.validate_graph`."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphValidationError([Problem("schema", str(path), str(exc))]) from exc
    G = parse_graph(data)
    if validate:
        report = validate_graph(G)
        if not report.ok:
            raise GraphValidationError(report.problems)
    return G


def graph_to_dict(G: WeightedGraph) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "vertices": [{"id": v.id, "genus": v.genus, "self_intersection": v.self_int}
                     for v in G.vertices],
        "edges": [[e.u, e.v] for e in G.edges],
    }


def dumps_graph(G: WeightedGraph) -> str:
    """Serialize in the hand-editable layout used by the bundled corpus:
    one vertex or edge per line."""
    d = graph_to_dict(G)
    vs = ",\n".join("    " + json.dumps(v) for v in d["vertices"])
    es = ",\n".join("    " + json.dumps(e) for e in d["edges"])
    return (f'{{\n  "version": {d["version"]},\n'
            f'  "vertices": [\n{vs}\n  ],\n'
            f'  "edges": [\n{es}\n  ]\n}}\n').replace("[\n\n  ]", "[]")


def graph_hash(G: WeightedGraph) -> str:
    canon = json.dumps(graph_to_dict(G), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def example_names() -> list[str]:
    root = resources.files("lnegraph") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def example_path(name: str):
    return resources.files("lnegraph") / "corpus" / f"{name}.json"


def load_example(name: str) -> WeightedGraph:
    """Load one of the bundled corpus graphs, e.g. ``"a2_minimal"``."""
    return parse_graph(json.loads(example_path(name).read_text()))
