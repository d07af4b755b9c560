"""Graph generators and independent oracles shared by the test modules."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import networkx as nx
import numpy as np
from hypothesis import strategies as st

from lnegraph.graph import Edge, Vertex, WeightedGraph, is_negative_definite

BOX = 8  # brute-force coefficient bound


def intersection_matrix(G: WeightedGraph) -> np.ndarray:
    """Plain numpy intersection matrix, built without the package's helpers."""
    idx = {v.id: k for k, v in enumerate(G.vertices)}
    M = np.zeros((len(idx), len(idx)), dtype=np.int64)
    for v in G.vertices:
        M[idx[v.id], idx[v.id]] = v.self_int
    for e in G.edges:
        M[idx[e.u], idx[e.v]] += 1
        M[idx[e.v], idx[e.u]] += 1
    return M


@lru_cache(maxsize=64)
def _box(bounds: tuple[int, ...]) -> np.ndarray:
    # float64 keeps the matrix product on BLAS; every value here is a small
    # integer, so the arithmetic stays exact
    axes = [np.arange(b + 1, dtype=np.float64) for b in bounds]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(bounds))
    return grid[grid.any(axis=1)]


def brute_force_zmin(G: WeightedGraph, bounds=None) -> dict | None:
    """Smallest nonzero Z with 0 <= Z_v <= bounds[v] and Z·E_v <= 0 for every v.

    ``bounds`` defaults to BOX everywhere.  Returns None when the box holds
    no such vector.  Checks that the sum-minimal candidate lies below every
    other candidate, which is what makes it the minimum of the cone and not
    just a minimal element.
    """
    M = intersection_matrix(G).astype(np.float64)
    if bounds is None:
        bounds = {v.id: BOX for v in G.vertices}
    box = _box(tuple(bounds[v.id] for v in G.vertices))
    feasible = box[(box @ M <= 0).all(axis=1)]
    if len(feasible) == 0:
        return None
    best = feasible[feasible.sum(axis=1).argmin()]
    assert (feasible >= best).all(), "cone has no componentwise minimum inside the box"
    return {v.id: int(best[k]) for k, v in enumerate(G.vertices)}


def from_nx(H: nx.Graph, weights, genera=None) -> WeightedGraph:
    ids = [f"n{k}" for k in sorted(H.nodes)]
    genera = genera or [0] * len(ids)
    vertices = tuple(Vertex(ids[k], genera[k], w) for k, w in enumerate(weights))
    edges = tuple(Edge(f"e{j}", ids[a], ids[b]) for j, (a, b) in enumerate(sorted(H.edges)))
    return WeightedGraph(vertices, edges)


def atlas_graphs(max_vertices: int = 5, weights=(-1, -2, -3, -4)):
    """Every connected simple graph on at most ``max_vertices`` vertices with
    every choice of self-intersections, kept when negative definite."""
    for H in nx.graph_atlas_g():
        n = H.number_of_nodes()
        if n == 0 or n > max_vertices or not nx.is_connected(H):
            continue
        for ws in itertools.product(weights, repeat=n):
            G = from_nx(H, ws)
            if is_negative_definite(G):
                yield G


def random_graph(rng: random.Random, max_vertices: int = 6, max_e: int = 4,
                 genus_prob: float = 0.0, extra_edge_prob: float = 0.3) -> WeightedGraph:
    """Random connected multigraph: a random tree plus extra (possibly parallel) edges."""
    n = rng.randint(1, max_vertices)
    ids = [f"u{k}" for k in range(n)]
    vertices = tuple(Vertex(i, 1 if rng.random() < genus_prob else 0, -rng.randint(1, max_e))
                     for i in ids)
    pairs = [(ids[rng.randrange(k)], ids[k]) for k in range(1, n)]
    for a, b in itertools.combinations(ids, 2):
        if rng.random() < extra_edge_prob:
            pairs.append((a, b))
    return WeightedGraph(vertices, tuple(Edge(f"e{k}", a, b) for k, (a, b) in enumerate(pairs)))


def random_negative_definite(count: int, seed: int, **kwargs) -> list[WeightedGraph]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        G = random_graph(rng, **kwargs)
        if is_negative_definite(G):
            out.append(G)
    return out


@st.composite
def weighted_graphs(draw, max_vertices: int = 5, max_e: int = 4, genus: bool = False):
    """Hypothesis strategy for connected negative-definite weighted multigraphs."""
    n = draw(st.integers(1, max_vertices))
    ids = [f"u{k}" for k in range(n)]
    selfs = draw(st.lists(st.integers(-max_e, -1), min_size=n, max_size=n))
    genera = draw(st.lists(st.integers(0, 1 if genus else 0), min_size=n, max_size=n))
    pairs = [(ids[draw(st.integers(0, k - 1))], ids[k]) for k in range(1, n)]
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3))
    pairs += [(ids[a], ids[b]) for a, b in extra if a != b]
    G = WeightedGraph(tuple(Vertex(i, g, e) for i, g, e in zip(ids, genera, selfs)),
                      tuple(Edge(f"e{k}", a, b) for k, (a, b) in enumerate(pairs)))
    if not is_negative_definite(G):
        # deepen every self-intersection until definite; always terminates
        # because a diagonally dominant matrix is definite
        shift = max(len(G.neighbors(v)) for v in ids) + 1
        G = WeightedGraph(tuple(Vertex(v.id, v.genus, min(v.self_int, -shift)) for v in G.vertices),
                          G.edges)
    return G


@lru_cache(maxsize=None)
def accepted_runs(count: int, seed: int = 7, genus_prob: float = 0.1) -> tuple:
    """(reports, attempts): the first ``count`` seeded random graphs that the
    full pipeline accepts, and how many negative-definite graphs it took."""
    from lnegraph.pipeline import run_pipeline

    rng = random.Random(seed)
    reports = []
    attempts = 0
    while len(reports) < count:
        G = random_graph(rng, genus_prob=genus_prob)
        if not is_negative_definite(G):
            continue
        attempts += 1
        report = run_pipeline(G)
        if report.accepted:
            reports.append(report)
    return tuple(reports), attempts
