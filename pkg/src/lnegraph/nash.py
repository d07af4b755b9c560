"""𝒫-nodes and refinement of the minimal resolution through the Nash transform.

An edge [v, v'] must be blown up while |q_v - q_v'| is strictly smaller than
its length: the inner-rate function then peaks inside the edge, at a single
𝒫-node of rate (d + q_v + q_v') / 2.  Successive double-point blowups walk
down the Stern-Brocot tree of the edge towards that peak, so the number of
blowups per edge is a sum of continued-fraction partial quotients and can be
predicted exactly before the loop starts.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cycles import CycleData, NotLneCertificate, Violation
from .errors import InvariantViolation
from .graph import WeightedGraph, blow_up_double_point
from .rates import RateAssignment, distance_to_set, edge_length, p_vector

log = logging.getLogger(__name__)

DEFAULT_BLOWUP_CAP = 10_000


def default_cap() -> int:
    raw = os.environ.get("LNE_BLOWUP_CAP")
    return int(raw) if raw else DEFAULT_BLOWUP_CAP


@dataclass(frozen=True)
class Provenance:
    """Where a created vertex sits on an edge of the input graph.

    ``position`` is the metric distance from the edge's first endpoint.
    """

    parent_edge: str
    position: Fraction


@dataclass(frozen=True)
class RefinedGraph:
    graph: WeightedGraph
    cycle_data: CycleData
    rates: RateAssignment
    p_nodes: frozenset
    p_vector: dict
    local_degrees: dict
    provenance: dict
    blowups: int


def incoming_edge_count(G: WeightedGraph, rates: RateAssignment, v: str) -> int:
    return sum(1 for w in G.neighbors(v) if rates.q(w) < rates.q(v))


def edge_needs_blowup(q_v, m_v: int, q_w, m_w: int) -> bool:
    return abs(q_v - q_w) < edge_length(m_v, m_w)


def interior_p_node_rate(q_v, q_w, d) -> Fraction:
    if not abs(q_v - q_w) < d:
        raise ValueError("edge is already tight; it contains no interior 𝒫-node")
    return (Fraction(d) + q_v + q_w) / 2


def continued_fraction(x: Fraction) -> list[int]:
    x = Fraction(x)
    out = []
    while True:
        a = x.numerator // x.denominator
        out.append(a)
        x -= a
        if x == 0:
            return out
        x = 1 / x


def predicted_blowups(m_v: int, m_w: int, q_v, q_w) -> int:
    """Number of double-point blowups needed to expose the peak on [v, w].

    Divisorial points of the edge are the Farey pairs (a, b) with multiplicity
    a·m_v + b·m_w; the one at distance t from v satisfies
    b / (a·m_v' + b·m_w') = t·g·m_v' (primes: divided by g = gcd).  Its depth
    in the Stern-Brocot tree is the sum of the partial quotients of b/a.
    """
    d = edge_length(m_v, m_w)
    if not abs(q_v - q_w) < d:
        return 0
    t = (d + q_w - q_v) / 2
    g = gcd(m_v, m_w)
    a1, b1 = m_v // g, m_w // g
    u = t * g * a1
    ratio = u * a1 / (1 - u * b1)
    return sum(continued_fraction(ratio))


def _rates(G: WeightedGraph, m: dict, l_nodes) -> RateAssignment:
    dist = distance_to_set(G, m, l_nodes)
    return RateAssignment(dict(m), {v: dist[v] + 1 for v in G.ids})


def p_nodes(G: WeightedGraph, data: CycleData, rates: RateAssignment) -> frozenset:
    """Vertices with l_v > 1 or at least two incoming edges."""
    return frozenset(v for v in G.ids
                     if data.l(v) > 1 or incoming_edge_count(G, rates, v) >= 2)


def local_degree(G: WeightedGraph, data: CycleData, rates: RateAssignment, v: str) -> int:
    if v in data.l_nodes:
        return data.l(v)
    return incoming_edge_count(G, rates, v)


def nash_refine(G: WeightedGraph, data: CycleData, rates: RateAssignment,
                cap: int | None = None, coarse_p: dict | None = None) -> RefinedGraph | NotLneCertificate:
    """Blow up double points until every edge is tight, then classify 𝒫-nodes.

    Qualifying edges are handled in edge-list order; rates are recomputed
    globally after each blowup.  When ``coarse_p`` (the 𝒫-vector on ``G``)
    is given, conservation of Σ p_v m_v is asserted.  Returns a certificate
    when the refined graph violates a necessary LNE condition.
    """
    cap = default_cap() if cap is None else cap
    q0 = rates.rates

    targets = {}
    expected = 0
    for e in G.edges:
        if edge_needs_blowup(q0[e.u], rates.m(e.u), q0[e.v], rates.m(e.v)):
            d = edge_length(rates.m(e.u), rates.m(e.v))
            targets[e.id] = interior_p_node_rate(q0[e.u], q0[e.v], d)
            expected += predicted_blowups(rates.m(e.u), rates.m(e.v), q0[e.u], q0[e.v])
    if expected > cap:
        raise InvariantViolation(
            f"refinement needs {expected} blowups, above the cap of {cap}",
            {"cap": cap, "expected": expected,
             "edges": {k: str(v) for k, v in targets.items()}})

    g, m = G, dict(data.multiplicities)
    lv = dict(data.l_vector)
    q = rates
    # edge id -> (input edge, position of first endpoint, position of second)
    span = {e.id: (e.id, Fraction(0), edge_length(m[e.u], m[e.v])) for e in G.edges}
    provenance: dict[str, Provenance] = {}
    count = 0
    while True:
        e = next((f for f in g.edges
                  if edge_needs_blowup(q.q(f.u), m[f.u], q.q(f.v), m[f.v])), None)
        if e is None:
            break
        if count >= cap:
            raise InvariantViolation(f"refinement exceeded the cap of {cap} blowups",
                                     {"cap": cap, "graph_size": len(g.vertices), "edge": e.id})
        g, m, w = blow_up_double_point(g, m, e.id)
        lv[w] = 0
        root, tu, tv = span.pop(e.id)
        sign = 1 if tv > tu else -1
        tw = tu + sign * edge_length(m[e.u], m[w])
        if tw + sign * edge_length(m[w], m[e.v]) != tv:
            raise InvariantViolation("edge subdivision changed the metric", {"edge": e.id})
        span[f"{w}:0"] = (root, tu, tw)
        span[f"{w}:1"] = (root, tw, tv)
        provenance[w] = Provenance(root, tw)
        new_q = _rates(g, m, data.l_nodes)
        if any(new_q.q(v) != q.q(v) for v in q.rates):
            raise InvariantViolation("blowup changed the rate of an existing vertex", {"vertex": w})
        q = new_q
        count += 1
    if count != expected:
        raise InvariantViolation(f"performed {count} blowups, predicted {expected}",
                                 {"targets": {k: str(v) for k, v in targets.items()}})
    log.debug("nash refinement: %d blowups", count)

    for root, rate in targets.items():
        peaks = [w for w, pv in provenance.items() if pv.parent_edge == root and q.q(w) == rate]
        if len(peaks) != 1:
            raise InvariantViolation(f"edge {root} does not carry exactly one peak of rate {rate}",
                                     {"peaks": peaks})

    refined = CycleData(z_min=dict(m), multiplicities=dict(m), l_vector=lv,
                        l_nodes=data.l_nodes)
    p = p_vector(g, refined, q)
    if isinstance(p, NotLneCertificate):
        return NotLneCertificate(p.violations, stage="nash")
    if coarse_p is not None:
        before = sum(coarse_p[v] * data.multiplicities[v] for v in G.ids)
        after = sum(p[v] * m[v] for v in g.ids)
        if before != after:
            raise InvariantViolation(f"Σ p_v m_v changed under refinement: {before} -> {after}")

    by_rule = p_nodes(g, refined, q)
    by_formula = frozenset(v for v in g.ids if p[v] > 0)
    bad = [Violation("p-node-characterization", v,
                     f"p_v = {p[v]} but l_v = {lv[v]} and {incoming_edge_count(g, q, v)} incoming edges")
           for v in g.ids if (v in by_rule) != (v in by_formula)]
    bad += [Violation("genus-p-node", v, f"vertex of genus {g.vertex(v).genus} is not a 𝒫-node")
            for v in g.ids if g.vertex(v).genus > 0 and v not in by_formula]
    if bad:
        return NotLneCertificate(tuple(bad), stage="nash")

    degrees = {v: local_degree(g, refined, q, v) for v in g.ids}
    return RefinedGraph(graph=g, cycle_data=refined, rates=q, p_nodes=by_formula, p_vector=p,
                        local_degrees=degrees, provenance=provenance, blowups=count)
