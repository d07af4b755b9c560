"""Weighted dual graphs and exact intersection theory on them.

A :class:`WeightedGraph` is the combinatorial shadow of the exceptional
divisor of a good resolution: one vertex per irreducible component (carrying
its genus and self-intersection) and one edge per intersection point.
Multi-edges are allowed and are addressed by edge id; loops are not.

Divisors are plain ``dict`` objects mapping vertex id to an integer (or a
``Fraction`` for rational cycles).  All arithmetic is exact.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping

Divisor = dict  # vertex id -> int (or Fraction)

_BLOWUP_ID = re.compile(r"^b(\d+)$")


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int
    self_int: int


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str

    def other(self, x: str) -> str:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise KeyError(f"vertex {x!r} is not an endpoint of edge {self.id!r}")


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable weighted graph; construction does not validate (see
    :func:`validate_graph`)."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable = ()) -> "WeightedGraph":
        """Build from ``(id, genus, self_int)`` triples and ``(u, v)`` pairs.

        Edge pairs get ids ``e0, e1, ...`` in order; already-built
        :class:`Edge` objects are kept as is.
        """
        vs = tuple(v if isinstance(v, Vertex) else Vertex(str(v[0]), int(v[1]), int(v[2]))
                   for v in vertices)
        es = []
        for k, e in enumerate(edges):
            es.append(e if isinstance(e, Edge) else Edge(f"e{k}", str(e[0]), str(e[1])))
        return cls(vs, tuple(es))

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def _vindex(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def _eindex(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def order(self) -> dict[str, int]:
        """Position of each vertex id in the vertex list (tie-break key)."""
        return {v: k for k, v in enumerate(self.ids)}

    @cached_property
    def _incident(self) -> dict[str, list[Edge]]:
        inc: dict[str, list[Edge]] = {v: [] for v in self.ids}
        for e in self.edges:
            inc.setdefault(e.u, []).append(e)
            if e.v != e.u:
                inc.setdefault(e.v, []).append(e)
        return inc

    def __contains__(self, vid) -> bool:
        return vid in self._vindex

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._vindex[vid]
        except KeyError:
            raise KeyError(f"unknown vertex {vid!r}") from None

    def edge(self, eid: str) -> Edge:
        try:
            return self._eindex[eid]
        except KeyError:
            raise KeyError(f"unknown edge {eid!r}") from None

    def incident(self, vid: str) -> list[Edge]:
        self.vertex(vid)
        return list(self._incident[vid])

    def neighbors(self, vid: str) -> list[str]:
        """Far endpoints of incident edges, repeated for multi-edges."""
        return [e.other(vid) for e in self.incident(vid)]

    def valency(self, vid: str) -> int:
        return len(self.incident(vid))

    def incidence_matrix(self) -> list[list[int]]:
        """The matrix I_Γ in vertex-list order."""
        idx = self.order
        n = len(self.vertices)
        mat = [[0] * n for _ in range(n)]
        for k, v in enumerate(self.vertices):
            mat[k][k] = v.self_int
        for e in self.edges:
            i, j = idx[e.u], idx[e.v]
            mat[i][j] += 1
            mat[j][i] += 1
        return mat

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.ids[0]}
        todo = deque(seen)
        while todo:
            x = todo.popleft()
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return len(seen) == len(self.vertices)


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Problem:
    rule: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.subject}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[Problem, ...] = ()
    checks: tuple[str, ...] = field(default=(
        "ids", "endpoints", "loops", "genus", "self_intersection", "connected", "negative_definite"))

    @property
    def ok(self) -> bool:
        return not self.problems

    def failed(self) -> set[str]:
        return {p.rule for p in self.problems}

    def as_dict(self) -> dict:
        failed = self.failed()
        return {
            "ok": self.ok,
            "checks": {c: c not in failed for c in self.checks},
            "problems": [{"rule": p.rule, "subject": p.subject, "message": p.message}
                         for p in self.problems],
        }


def validate_graph(raw: WeightedGraph) -> ValidationReport:
    """Check the hypotheses a resolution graph must satisfy.

    Every violated constraint yields one :class:`Problem`; this function never
    raises on bad input.  Negative-definiteness is only tested when the
    matrix is well defined (ids unique, endpoints known, no loops).
    """
    problems: list[Problem] = []
    if not raw.vertices:
        problems.append(Problem("connected", "graph", "graph has no vertices"))

    seen: set[str] = set()
    for v in raw.vertices:
        if v.id in seen:
            problems.append(Problem("ids", v.id, "duplicate vertex id"))
        seen.add(v.id)
        if v.genus < 0:
            problems.append(Problem("genus", v.id, f"genus {v.genus} is negative"))
        if v.self_int >= 0:
            problems.append(Problem("self_intersection", v.id,
                                    f"self-intersection {v.self_int} is not negative"))
    eseen: set[str] = set()
    for e in raw.edges:
        if e.id in eseen:
            problems.append(Problem("ids", e.id, "duplicate edge id"))
        eseen.add(e.id)
        for x in (e.u, e.v):
            if x not in seen:
                problems.append(Problem("endpoints", e.id, f"unknown endpoint {x!r}"))
        if e.u == e.v:
            problems.append(Problem("loops", e.id, f"loop at vertex {e.u!r}"))

    structural = {"ids", "endpoints", "loops"}
    if not any(p.rule in structural for p in problems) and raw.vertices:
        if not raw.is_connected():
            problems.append(Problem("connected", "graph", "graph is not connected"))
        if not is_negative_definite(raw):
            minors = leading_minors(raw.incidence_matrix())
            problems.append(Problem("negative_definite", "graph",
                                    f"leading principal minors {minors} do not alternate in sign"))
    return ValidationReport(tuple(problems))


# --------------------------------------------------------------------------
# linear algebra


def leading_minors(mat: list[list[int]]) -> list[int]:
    """All leading principal minors, by fraction-free (Bareiss) elimination.

    Without pivoting the k-th Bareiss pivot is the k-th leading minor.  When a
    pivot vanishes the later minors are computed directly from fresh
    submatrices, which is slow but only happens on rejected inputs.
    """
    n = len(mat)
    a = [list(map(int, row)) for row in mat]
    minors: list[int] = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            minors.extend(_det([row[: j + 1] for row in mat[: j + 1]]) for j in range(k + 1, n))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return minors


def _det(mat: list[list[int]]) -> int:
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return int(det)


def is_negative_definite(G: WeightedGraph) -> bool:
    """Sylvester's criterion: (-1)^k det_k > 0 for every leading minor."""
    minors = leading_minors(G.incidence_matrix())
    return all((-1) ** (k + 1) * d > 0 for k, d in enumerate(minors))


def _check_divisor(G: WeightedGraph, D: Mapping) -> None:
    if set(D) != set(G.ids):
        missing = sorted(set(G.ids) - set(D))
        extra = sorted(set(D) - set(G.ids))
        raise ValueError(f"divisor does not match vertex set (missing {missing}, extra {extra})")


def apply_incidence(G: WeightedGraph, D: Mapping) -> dict:
    """The vector I_Γ·D, i.e. v ↦ D·E_v."""
    _check_divisor(G, D)
    out = {}
    for v in G.vertices:
        acc = v.self_int * D[v.id]
        for w in G.neighbors(v.id):
            acc += D[w]
        out[v.id] = acc
    return out


def intersection(G: WeightedGraph, D1: Mapping, D2: Mapping):
    """D1ᵀ·I_Γ·D2."""
    _check_divisor(G, D1)
    ID2 = apply_incidence(G, D2)
    return sum(D1[v] * ID2[v] for v in G.ids)


def point_divisor(G: WeightedGraph, vid: str, coeff: int = 1) -> Divisor:
    G.vertex(vid)
    return {v: (coeff if v == vid else 0) for v in G.ids}


def canonical_pairing(G: WeightedGraph, vid: str) -> int:
    """Z_Γ·E_v = -e(v) + 2g(v) - 2, for the canonical cycle Z_Γ."""
    v = G.vertex(vid)
    return -v.self_int + 2 * v.genus - 2


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# --------------------------------------------------------------------------
# double-point blowup


def next_blowup_id(G: WeightedGraph) -> str:
    taken = [int(m.group(1)) for m in map(_BLOWUP_ID.match, G.ids) if m]
    return f"b{max(taken, default=0) + 1}"


def blow_up_double_point(G: WeightedGraph, m: Mapping[str, int], edge_id: str,
                         new_id: str | None = None):
    """Blow up the intersection point represented by ``edge_id``.

    Returns ``(G', m', w)``: the edge [v, v'] is replaced by [v, w], [w, v']
    (ids ``"<w>:0"`` and ``"<w>:1"``, inserted where the old edge was), w is a
    new rational (-1)-vertex of multiplicity m_v + m_v', and e(v), e(v') each
    drop by one.
    """
    e = G.edge(edge_id)
    w = new_id or next_blowup_id(G)
    if w in G:
        raise ValueError(f"vertex id {w!r} already in use")
    verts = []
    for v in G.vertices:
        drop = (v.id == e.u) + (v.id == e.v)
        verts.append(Vertex(v.id, v.genus, v.self_int - drop) if drop else v)
    verts.append(Vertex(w, 0, -1))
    edges = []
    for f in G.edges:
        if f.id == edge_id:
            edges.append(Edge(f"{w}:0", e.u, w))
            edges.append(Edge(f"{w}:1", w, e.v))
        else:
            edges.append(f)
    m2 = dict(m)
    m2[w] = m[e.u] + m[e.v]
    return WeightedGraph(tuple(verts), tuple(edges)), m2, w
