"""Inner rates from the graph metric, and the 𝒫-vector.

Edges carry length 1/lcm(m_v, m_w).  For an LNE germ the inner rate of a
vertex is its distance to the set of ℒ-nodes plus one, and the 𝒫-vector
follows in closed form from multiplicities and rates.  The Laplacian
identity I·A = K + L - P (with a_v = m_v q_v) is kept as an independent
check rather than as the solver.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .cycles import CycleData, NotLneCertificate, Violation
from .errors import InvariantViolation
from .graph import WeightedGraph, apply_incidence, canonical_pairing, lcm


@dataclass(frozen=True)
class RateAssignment:
    multiplicities: dict
    rates: dict

    def q(self, v: str) -> Fraction:
        return self.rates[v]

    def m(self, v: str) -> int:
        return self.multiplicities[v]


@dataclass(frozen=True)
class LaplacianVectors:
    A: dict
    K: dict
    L: dict
    P: dict


def edge_length(m_v: int, m_w: int) -> Fraction:
    if m_v <= 0 or m_w <= 0:
        raise ValueError(f"multiplicities must be positive, got {m_v}, {m_w}")
    return Fraction(1, lcm(m_v, m_w))


def distance_to_set(G: WeightedGraph, m: Mapping[str, int], sources: Iterable[str]) -> dict:
    """Exact multi-source shortest-path distances in the 1/lcm metric."""
    sources = list(sources)
    if not sources:
        raise ValueError("source set is empty")
    order = G.order
    dist: dict[str, Fraction] = {}
    heap = [(Fraction(0), order[s], s) for s in sources]
    heapq.heapify(heap)
    while heap:
        d, _, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = d
        for e in G.incident(x):
            y = e.other(x)
            if y not in dist:
                heapq.heappush(heap, (d + edge_length(m[x], m[y]), order[y], y))
    if len(dist) != len(G.vertices):
        raise ValueError("graph is disconnected")
    return dist


def inner_rates(G: WeightedGraph, data: CycleData) -> RateAssignment:
    dist = distance_to_set(G, data.multiplicities, data.l_nodes)
    return RateAssignment(dict(data.multiplicities), {v: dist[v] + 1 for v in G.ids})


def polar_formula(G: WeightedGraph, data: CycleData, rates: RateAssignment) -> dict:
    """Raw value of -E_v·(Σ (m q - 1) E - (Z_Γ - Z_min)) at every vertex."""
    shifted = {v: rates.m(v) * rates.q(v) - 1 for v in G.ids}
    pairing = apply_incidence(G, shifted)
    zmin = apply_incidence(G, data.z_min)
    return {v: -(pairing[v] - canonical_pairing(G, v) + zmin[v]) for v in G.ids}


def all_edges_tight(G: WeightedGraph, rates: RateAssignment, v: str) -> bool:
    return all(abs(rates.q(v) - rates.q(e.other(v))) == edge_length(rates.m(v), rates.m(e.other(v)))
               for e in G.incident(v))


def p_vector(G: WeightedGraph, data: CycleData, rates: RateAssignment) -> dict | NotLneCertificate:
    """The 𝒫-vector, or a certificate when some entry is not a non-negative integer.

    At an ℒ-node whose incident edges are all tight the value must also equal
    2(g + l - 1); a mismatch there is an internal error.
    """
    raw = polar_formula(G, data, rates)
    bad = []
    for v in G.ids:
        p = raw[v]
        if p.denominator != 1:
            bad.append(Violation("p-integral", v, f"p_v = {p} is not an integer"))
        elif p < 0:
            bad.append(Violation("p-nonnegative", v, f"p_v = {p} is negative"))
    if bad:
        return NotLneCertificate(tuple(bad), stage="rates")
    p = {v: int(raw[v]) for v in G.ids}
    for v in data.l_nodes:
        if all_edges_tight(G, rates, v):
            short = 2 * (G.vertex(v).genus + data.l(v) - 1)
            if short != p[v]:
                raise InvariantViolation(
                    f"ℒ-node shortcut disagrees at {v}: formula {p[v]}, shortcut {short}",
                    {"p": p, "rates": {k: str(x) for k, x in rates.rates.items()}})
    return p


def laplacian_vectors(G: WeightedGraph, data: CycleData, rates: RateAssignment,
                      p: Mapping[str, int]) -> LaplacianVectors:
    return LaplacianVectors(
        A={v: rates.m(v) * rates.q(v) for v in G.ids},
        K={v: G.valency(v) + 2 * G.vertex(v).genus - 2 for v in G.ids},
        L=dict(data.l_vector),
        P=dict(p),
    )


def laplacian_residual(G: WeightedGraph, vec: LaplacianVectors) -> dict:
    """I·A - (K + L - P); identically zero on a consistent state."""
    ia = apply_incidence(G, vec.A)
    return {v: ia[v] - (vec.K[v] + vec.L[v] - vec.P[v]) for v in G.ids}
