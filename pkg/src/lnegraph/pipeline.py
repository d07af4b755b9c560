"""End-to-end run: validation, cycles, rates, Nash refinement, discriminant."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__
from .cycles import CycleData, NotLneCertificate, lne_cycle_data, total_multiplicity
from .discriminant import (EggersWallTree, PrincipalPart, QuotientGraph, branch_exponent_lists,
                           eggers_wall_tree, equivalence_classes, node_set, principal_part,
                           quotient_graph)
from .errors import InvariantViolation
from .graph import ValidationReport, WeightedGraph, validate_graph
from .io import fmt_rational, graph_hash, graph_to_dict
from .nash import RefinedGraph, nash_refine
from .rates import (RateAssignment, inner_rates, laplacian_residual, laplacian_vectors,
                    p_vector)


@dataclass
class PipelineReport:
    graph: WeightedGraph
    validation: ValidationReport
    cycle_data: CycleData | None = None
    total_multiplicity: int | None = None
    rates: RateAssignment | None = None
    coarse_p: dict | None = None
    refined: RefinedGraph | None = None
    principal: PrincipalPart | None = None
    quotient: QuotientGraph | None = None
    eggers_wall: EggersWallTree | None = None
    certificate: NotLneCertificate | None = None
    stages: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        """True when the whole pipeline ran through without a certificate."""
        return self.validation.ok and self.certificate is None and self.eggers_wall is not None

    def to_dict(self) -> dict:
        return report_dict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


STAGES = ("validate", "cycles", "rates", "nash", "discriminant")


def run_pipeline(G: WeightedGraph, cap: int | None = None,
                 stop_after: str | None = None) -> PipelineReport:
    """Run every stage in order, stopping at the first failed check.

    Validation failures and not-LNE certificates end up in the report;
    :class:`~lnegraph.errors.InvariantViolation` propagates.  ``stop_after``
    names the last stage to run (one of :data:`STAGES`).
    """
    if stop_after is not None and stop_after not in STAGES:
        raise ValueError(f"unknown stage {stop_after!r}")
    report = PipelineReport(graph=G, validation=validate_graph(G))
    if not report.validation.ok:
        return report
    report.stages.append("validate")
    if stop_after == "validate":
        return report

    data = lne_cycle_data(G)
    if isinstance(data, NotLneCertificate):
        report.certificate = data
        return report
    report.cycle_data = data
    report.total_multiplicity = total_multiplicity(G, data)
    if report.total_multiplicity != sum(data.multiplicities[v] * data.l(v) for v in G.ids):
        raise InvariantViolation("-Z·Z differs from Σ m_v l_v")
    report.stages.append("cycles")
    if stop_after == "cycles":
        return report

    rates = report.rates = inner_rates(G, data)
    p = p_vector(G, data, rates)
    if isinstance(p, NotLneCertificate):
        report.certificate = p
        return report
    report.coarse_p = p
    _check_laplacian(G, data, rates, p)
    report.stages.append("rates")
    if stop_after == "rates":
        return report

    refined = nash_refine(G, data, rates, cap=cap, coarse_p=p)
    if isinstance(refined, NotLneCertificate):
        report.certificate = refined
        return report
    report.refined = refined
    _check_laplacian(refined.graph, refined.cycle_data, refined.rates, refined.p_vector)
    report.stages.append("nash")
    if stop_after == "nash":
        return report

    nodes = node_set(refined)
    pp = report.principal = principal_part(refined, nodes)
    partition = equivalence_classes(pp, refined.rates)
    q = quotient_graph(pp, partition, refined.rates, refined.p_vector, refined.cycle_data.l_nodes)
    if isinstance(q, NotLneCertificate):
        report.certificate = q
        return report
    report.quotient = q
    report.eggers_wall = eggers_wall_tree(q)
    report.stages.append("discriminant")
    return report


def _check_laplacian(G, data, rates, p):
    residual = laplacian_residual(G, laplacian_vectors(G, data, rates, p))
    if any(residual.values()):
        raise InvariantViolation("Laplacian identity fails",
                                 {v: fmt_rational(r) for v, r in residual.items()})


# --------------------------------------------------------------------------
# serialization


def _ints(d: dict, order) -> dict:
    return {v: d[v] for v in order}


def _rats(d: dict, order) -> dict:
    return {v: fmt_rational(d[v]) for v in order}


def report_dict(r: PipelineReport) -> dict:
    G = r.graph
    out: dict = {
        "tool": {"name": "lnegraph", "version": __version__},
        "input_hash": graph_hash(G),
        "input": graph_to_dict(G),
        "validation": r.validation.as_dict(),
        "not_lne_certificate": r.certificate.as_dict() if r.certificate else None,
        "stages_completed": list(r.stages),
    }
    ids = G.ids
    if r.cycle_data is not None:
        cd = r.cycle_data
        out["fundamental_cycle"] = _ints(cd.z_min, ids)
        out["multiplicities"] = _ints(cd.multiplicities, ids)
        out["l_vector"] = _ints(cd.l_vector, ids)
        out["l_nodes"] = [v for v in ids if v in cd.l_nodes]
        out["total_multiplicity"] = r.total_multiplicity
    if r.rates is not None:
        out["inner_rates"] = _rats(r.rates.rates, ids)
    if r.coarse_p is not None:
        out["coarse_p_vector"] = _ints(r.coarse_p, ids)
    if r.refined is not None:
        rf = r.refined
        rids = rf.graph.ids
        refined = graph_to_dict(rf.graph)
        refined["edge_ids"] = [e.id for e in rf.graph.edges]
        refined["provenance"] = {
            w: {"parent_edge": pv.parent_edge, "position": fmt_rational(pv.position)}
            for w, pv in rf.provenance.items()}
        refined["multiplicities"] = _ints(rf.cycle_data.multiplicities, rids)
        refined["l_vector"] = _ints(rf.cycle_data.l_vector, rids)
        refined["inner_rates"] = _rats(rf.rates.rates, rids)
        refined["blowups"] = rf.blowups
        out["refined_graph"] = refined
        out["p_vector"] = _ints(rf.p_vector, rids)
        out["p_nodes"] = [v for v in rids if v in rf.p_nodes]
        out["local_degrees"] = _ints(rf.local_degrees, rids)
    if r.quotient is not None:
        q = r.quotient
        out["quotient"] = {
            "principal_part": list(r.principal.vertices),
            "stripped": list(r.principal.stripped),
            "node_set": [v for v in r.refined.graph.ids if v in r.principal.nodes],
            "root": q.root,
            "delta_classes": list(q.delta_classes),
            "classes": [{"id": c, "members": list(q.members[c]), "rate": fmt_rational(q.rate[c]),
                         "multiplicity": q.multiplicity[c], "arrows": q.arrows[c],
                         "is_node": c in q.node_classes}
                        for c in q.classes],
            "edges": [list(e) for e in q.edges],
        }
    if r.eggers_wall is not None:
        ew = r.eggers_wall
        branches = branch_exponent_lists(ew)
        out["eggers_wall"] = {
            "root": ew.root,
            "nodes": [{"id": n.id, "kind": n.kind, "multiplicity": n.multiplicity,
                       "e": fmt_rational(n.e) if n.decorated else None}
                      for n in ew.nodes.values()],
            "edges": [{"parent": e.parent, "child": e.child, "i": e.i, "kind": e.kind}
                      for e in ew.edges],
            "branches": [{"leaf": b.leaf,
                          "exponents": [fmt_rational(x) for x in b.exponents],
                          "exponents_at_index_jumps": [fmt_rational(x) for x in b.at_index_jumps],
                          "diverges": b.diverges}
                         for b in branches],
        }
    return out
