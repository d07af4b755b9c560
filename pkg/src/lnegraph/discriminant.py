"""Eggers-Wall tree of the generic discriminant curve.

The resolution graph of the discriminant is recovered as a quotient of the
principal part of the Nash-refined graph: two vertices are identified when
they have the same inner rate q and can be joined by a path along which the
rate never drops below q.  Decorating the quotient with rates (node
exponents) and lcm-multiplicities (edge indices) gives the Eggers-Wall tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .cycles import NotLneCertificate, Violation
from .errors import InvariantViolation
from .graph import Edge, lcm
from .nash import RefinedGraph
from .rates import RateAssignment


@dataclass(frozen=True)
class PrincipalPart:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    nodes: frozenset
    stripped: tuple[str, ...] = ()

    def neighbors(self, v: str) -> list[str]:
        return [e.other(v) for e in self.edges if v in (e.u, e.v)]


@dataclass(frozen=True)
class Partition:
    class_of: dict
    members: dict  # class id -> tuple of vertices, in graph order


@dataclass(frozen=True)
class QuotientGraph:
    classes: tuple[str, ...]
    members: dict
    projection: dict
    edges: tuple[tuple[str, str], ...]
    edge_classes: dict  # principal-part edge id -> class edge
    rate: dict
    multiplicity: dict
    arrows: dict
    root: str
    delta_classes: tuple[str, ...]
    node_classes: frozenset


@dataclass(frozen=True)
class EWNode:
    id: str
    e: Fraction | None
    multiplicity: int
    kind: str  # "root", "delta", "node", "inner" or "leaf"
    decorated: bool


@dataclass(frozen=True)
class EWEdge:
    parent: str
    child: str
    i: int
    kind: str  # "internal" or "leaf"


@dataclass(frozen=True)
class EggersWallTree:
    root: str
    nodes: dict
    edges: tuple[EWEdge, ...]
    branch_leaves: tuple[str, ...] = field(default=())

    def parent_edge(self, x: str) -> EWEdge | None:
        return next((e for e in self.edges if e.child == x), None)

    def path_from_root(self, x: str) -> list[EWEdge]:
        path = []
        while (e := self.parent_edge(x)) is not None:
            path.append(e)
            x = e.parent
        return path[::-1]


@dataclass(frozen=True)
class BranchExponents:
    leaf: str
    exponents: tuple[Fraction, ...]
    at_index_jumps: tuple[Fraction, ...]

    @property
    def diverges(self) -> bool:
        return self.exponents != self.at_index_jumps


def node_set(refined: RefinedGraph) -> frozenset:
    g = refined.graph
    return frozenset(v for v in g.ids
                     if v in refined.cycle_data.l_nodes or v in refined.p_nodes
                     or g.valency(v) >= 3)


def _covered(vertices, edges, nodes) -> set[str]:
    """Vertices lying on an injective path between two distinct nodes."""
    H = nx.Graph()
    H.add_nodes_from(vertices)
    H.add_edges_from((e.u, e.v) for e in edges)
    sink = object()
    H.add_edges_from((n, sink) for n in nodes)
    out = set(v for v in vertices if v in nodes)
    for v in vertices:
        if v not in nodes and nx.node_connectivity(H, v, sink) >= 2:
            out.add(v)
    return out


def principal_part(refined: RefinedGraph, nodes: frozenset) -> PrincipalPart:
    """Strip non-node vertices of valency ≤ 1 until none is left."""
    g = refined.graph
    if not g.vertices or not nodes:
        raise ValueError("principal part of an empty graph or node set")
    alive = set(g.ids)
    edges = list(g.edges)
    stripped = []
    changed = True
    while changed:
        changed = False
        for v in g.ids:
            if v in alive and v not in nodes:
                if sum(1 for e in edges if v in (e.u, e.v)) <= 1:
                    alive.discard(v)
                    stripped.append(v)
                    edges = [e for e in edges if v not in (e.u, e.v)]
                    changed = True
    verts = tuple(v for v in g.ids if v in alive)
    if len(nodes) > 1:
        missing = set(verts) - _covered(verts, edges, nodes)
        if missing:
            raise InvariantViolation("principal part contains vertices off every node-to-node path",
                                     {"vertices": sorted(missing)})
    return PrincipalPart(verts, tuple(edges), frozenset(nodes), tuple(stripped))


class _DisjointSet:
    def __init__(self):
        self.parent: dict = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def equivalence_classes(pp: PrincipalPart, rates: RateAssignment) -> Partition:
    """v ~ v' iff equal rates and connected inside {u : q_u ≥ q_v}.

    Rate levels are swept in decreasing order, adding each level's vertices
    to a disjoint-set forest of the vertices already seen.
    """
    order = {v: k for k, v in enumerate(pp.vertices)}
    levels: dict[Fraction, list[str]] = {}
    for v in pp.vertices:
        levels.setdefault(rates.q(v), []).append(v)
    adj: dict[str, list[str]] = {v: [] for v in pp.vertices}
    for e in pp.edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    dsu = _DisjointSet()
    class_of: dict[str, str] = {}
    for level in sorted(levels, reverse=True):
        for v in levels[level]:
            dsu.add(v)
        for v in levels[level]:
            for w in adj[v]:
                if w in dsu.parent:
                    dsu.union(v, w)
        groups: dict[str, list[str]] = {}
        for v in levels[level]:
            groups.setdefault(dsu.find(v), []).append(v)
        for vs in groups.values():
            cid = min(vs, key=order.__getitem__)
            for v in vs:
                class_of[v] = cid
    members: dict[str, tuple[str, ...]] = {}
    for v in pp.vertices:
        members.setdefault(class_of[v], ())
        members[class_of[v]] += (v,)
    return Partition(class_of, members)


def quotient_graph(pp: PrincipalPart, partition: Partition, rates: RateAssignment,
                   p_vector: dict, l_nodes: frozenset) -> QuotientGraph | NotLneCertificate:
    cls = partition.class_of
    classes = tuple(partition.members)
    bad: list[Violation] = []

    rate, mult, arrows = {}, {}, {}
    for c, vs in partition.members.items():
        qs = {rates.q(v) for v in vs}
        ms = {rates.m(v) for v in vs}
        if len(qs) != 1:
            raise InvariantViolation(f"class {c} has several rates", {"members": vs})
        if len(ms) != 1:
            bad.append(Violation("class-multiplicity", c, f"members have multiplicities {sorted(ms)}"))
        rate[c] = rates.q(vs[0])
        mult[c] = min(ms)
        arrows[c] = sum(p_vector.get(v, 0) for v in vs)

    qedges: list[tuple[str, str]] = []
    edge_classes = {}
    for e in pp.edges:
        a, b = cls[e.u], cls[e.v]
        if a == b:
            bad.append(Violation("quotient-tree", a, f"edge {e.id} collapses to a loop"))
            continue
        key = tuple(sorted((a, b), key=classes.index))
        edge_classes[e.id] = key
        if key not in qedges:
            qedges.append(key)
    if len(qedges) != len(classes) - 1:
        bad.append(Violation("quotient-tree", None,
                             f"{len(classes)} classes but {len(qedges)} edges; quotient is not a tree"))

    root_classes = {cls[v] for v in l_nodes}
    root = min(root_classes, key=classes.index)
    if len(root_classes) != 1 or set(partition.members[root]) != set(l_nodes):
        bad.append(Violation("root-class", root,
                             f"root class {partition.members[root]} differs from ℒ-nodes {sorted(l_nodes)}"))
    delta = tuple(c for c in classes if arrows[c] > 0)
    nodes = frozenset(c for c in classes if any(v in pp.nodes for v in partition.members[c]))

    if not bad:
        parent = _bfs_parents(classes, qedges, root)
        for c in delta:
            x = c
            while parent[x] is not None:
                if not rate[parent[x]] < rate[x]:
                    bad.append(Violation("rate-monotone", c,
                                         f"rate does not increase from {parent[x]} to {x}"))
                    break
                x = parent[x]
    if bad:
        return NotLneCertificate(tuple(bad), stage="discriminant")
    return QuotientGraph(classes=classes, members=dict(partition.members), projection=dict(cls),
                         edges=tuple(qedges), edge_classes=edge_classes, rate=rate,
                         multiplicity=mult, arrows=arrows, root=root, delta_classes=delta,
                         node_classes=nodes)


def _bfs_parents(vertices, edges, root) -> dict:
    adj: dict = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = {root: None}
    todo = deque([root])
    while todo:
        x = todo.popleft()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                todo.append(y)
    return parent


def eggers_wall_tree(q: QuotientGraph) -> EggersWallTree:
    """Attach leaves to the quotient tree and decorate it.

    One leaf at the root, plus one per discriminant branch at each Δ-class.
    Nodes carry e = q; internal edges i = lcm of the endpoint multiplicities;
    leaf edges i = multiplicity of their node.
    """
    parent = _bfs_parents(q.classes, q.edges, q.root)
    nodes: dict[str, EWNode] = {}
    for c in q.classes:
        if c == q.root:
            kind = "root"
        elif q.arrows[c] > 0:
            kind = "delta"
        elif c in q.node_classes:
            kind = "node"
        else:
            kind = "inner"
        decorated = c in q.node_classes or c == q.root
        nodes[c] = EWNode(c, q.rate[c], q.multiplicity[c], kind, decorated)
    edges = [EWEdge(parent[c], c, lcm(q.multiplicity[parent[c]], q.multiplicity[c]), "internal")
             for c in q.classes if parent[c] is not None]

    axis = f"{q.root}/axis"
    nodes[axis] = EWNode(axis, None, q.multiplicity[q.root], "leaf", False)
    edges.append(EWEdge(q.root, axis, q.multiplicity[q.root], "leaf"))
    branches = []
    for c in q.classes:
        for k in range(q.arrows[c]):
            leaf = f"{c}/branch{k}"
            nodes[leaf] = EWNode(leaf, None, q.multiplicity[c], "leaf", False)
            edges.append(EWEdge(c, leaf, q.multiplicity[c], "leaf"))
            branches.append(leaf)
    return EggersWallTree(q.root, nodes, tuple(edges), tuple(branches))


def branch_exponent_lists(ew: EggersWallTree) -> list[BranchExponents]:
    """Per branch: node exponents along the root path, and the sub-list at index jumps.

    ``exponents`` lists e at every decorated non-root node between the root
    and the branch leaf.  ``at_index_jumps`` keeps such a node only when the
    largest edge index on the segment from the previous decorated node
    exceeds the index reached at that previous node (the axis leaf edge
    stands in front of the root).
    """
    axis_i = next(e.i for e in ew.edges if e.parent == ew.root and e.child == f"{ew.root}/axis")
    out = []
    for leaf in ew.branch_leaves:
        path = ew.path_from_root(leaf)[:-1]
        exps, jumps = [], []
        reached, seg = axis_i, 0
        for e in path:
            seg = max(seg, e.i)
            node = ew.nodes[e.child]
            if node.decorated:
                exps.append(node.e)
                if seg > reached:
                    jumps.append(node.e)
                reached, seg = max(reached, seg), 0
        out.append(BranchExponents(leaf, tuple(exps), tuple(jumps)))
    return out
