"""The fundamental cycle and the ℒ-vector it determines.

For a Lipschitz normally embedded germ the maximal ideal cycle coincides
with the fundamental cycle Z_min of the resolution graph, so multiplicities
and the ℒ-vector are read off the graph alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantViolation
from .graph import WeightedGraph, apply_incidence, intersection


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: str | None
    detail: str

    def as_dict(self) -> dict:
        return {"rule": self.rule, "vertex": self.vertex, "detail": self.detail}


@dataclass(frozen=True)
class NotLneCertificate:
    """Evidence that a graph cannot be the resolution graph of an LNE germ."""

    violations: tuple[Violation, ...]
    stage: str = ""

    def __bool__(self) -> bool:
        return bool(self.violations)

    def as_dict(self) -> dict:
        return {"stage": self.stage, "violations": [v.as_dict() for v in self.violations]}


@dataclass(frozen=True)
class CycleData:
    z_min: dict
    multiplicities: dict
    l_vector: dict
    l_nodes: frozenset

    def l(self, v: str) -> int:
        return self.l_vector[v]


def laufer_cap(G: WeightedGraph) -> int:
    return 64 * len(G.vertices) * max((-v.self_int for v in G.vertices), default=1)


def laufer_sequence(G: WeightedGraph):
    """Yield the successive working cycles of Laufer's algorithm.

    Start from Σ E_v; while some E_v has positive intersection with the working
    cycle, raise that coefficient by one (first such vertex in graph order).
    The last cycle yielded is Z_min.
    """
    z = {v: 1 for v in G.ids}
    cap = laufer_cap(G)
    yield dict(z)
    while True:
        iz = apply_incidence(G, z)
        bad = next((v for v in G.ids if iz[v] > 0), None)
        if bad is None:
            return
        z[bad] += 1
        if sum(z.values()) > cap:
            raise InvariantViolation(
                "Laufer iteration exceeded its cap; is the graph negative definite?",
                {"cap": cap, "cycle": dict(z)})
        yield dict(z)


def fundamental_cycle(G: WeightedGraph) -> dict:
    z = None
    for z in laufer_sequence(G):
        pass
    return z


def l_vector(G: WeightedGraph, Z: dict) -> dict:
    """v ↦ -(Z·E_v)."""
    iz = apply_incidence(G, Z)
    return {v: -iz[v] for v in G.ids}


def lne_cycle_data(G: WeightedGraph) -> CycleData | NotLneCertificate:
    z = fundamental_cycle(G)
    lv = l_vector(G, z)
    if any(x < 0 for x in lv.values()):
        raise InvariantViolation("fundamental cycle left the Lipman cone", {"z_min": z, "l": lv})
    l_nodes = frozenset(v for v in G.ids if lv[v] > 0)
    bad = [Violation("l-node-multiplicity", v, f"ℒ-node with l={lv[v]} has multiplicity {z[v]} != 1")
           for v in G.ids if v in l_nodes and z[v] != 1]
    if bad:
        return NotLneCertificate(tuple(bad), stage="cycles")
    return CycleData(z_min=z, multiplicities=dict(z), l_vector=lv, l_nodes=l_nodes)


def total_multiplicity(G: WeightedGraph, data: CycleData) -> int:
    """Multiplicity of the germ, -Z_min·Z_min."""
    return -intersection(G, data.z_min, data.z_min)
