"""Graphviz DOT export of the decorated graphs in a pipeline report.

Only portable DOT is emitted: an undirected ``graph`` with labelled nodes
and edges.  Arrow decorations (ℒ-arrows and 𝒫-arrows, or discriminant
branches in the quotient) are drawn as point-shaped stub nodes joined by an
edge with ``dir=forward``.  Everything is listed in graph order, so the
output is byte-stable.
"""

from __future__ import annotations

from .io import fmt_rational

STAGES = ("input", "refined", "quotient", "eggers_wall")


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _stubs(lines: list[str], v: str, kind: str, count: int) -> None:
    for k in range(count):
        stub = f"{v}/{kind}{k}"
        lines.append(f"  {_q(stub)} [shape=point, label=\"\"];")
        lines.append(f"  {_q(v)} -- {_q(stub)} [dir=forward];")


def _label(*parts) -> str:
    head, *rest = parts
    return head + " | " + " ".join(p for p in rest if p)


def _weighted(lines, G, m=None, q=None, l=None, p=None):
    for v in G.vertices:
        fields = [f"e={v.self_int}", f"g={v.genus}"]
        if m is not None:
            fields.append(f"m={m[v.id]}")
        if q is not None:
            fields.append(f"q={fmt_rational(q[v.id])}")
        lines.append(f"  {_q(v.id)} [shape=circle, label={_q(_label(v.id, *fields))}];")
    for e in G.edges:
        lines.append(f"  {_q(e.u)} -- {_q(e.v)} [label={_q(e.id)}];")
    for v in G.ids:
        if l is not None and v in l:
            _stubs(lines, v, "L", l[v])
        if p is not None:
            _stubs(lines, v, "P", p[v])


def export_dot(report, stage: str) -> str:
    """Render one stage of ``report`` (a :class:`~lnegraph.pipeline.PipelineReport`).

    Raises ``ValueError`` for an unknown stage, or when the stage was never
    reached (for instance the refined graph of a not-LNE input).
    """
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}; expected one of {', '.join(STAGES)}")
    lines = [f"graph {_q(stage)} {{", "  node [fontname=\"Helvetica\"];"]

    if stage == "input":
        cd, rates = report.cycle_data, report.rates
        _weighted(lines, report.graph,
                  m=cd.multiplicities if cd else None,
                  q=rates.rates if rates else None,
                  l={v: cd.l(v) for v in cd.l_nodes} if cd else None,
                  p=report.coarse_p)
    elif stage == "refined":
        rf = _require(report.refined, stage)
        cd = rf.cycle_data
        _weighted(lines, rf.graph, m=cd.multiplicities, q=rf.rates.rates,
                  l={v: cd.l(v) for v in cd.l_nodes}, p=rf.p_vector)
    elif stage == "quotient":
        qg = _require(report.quotient, stage)
        for c in qg.classes:
            label = _label(c, f"q={fmt_rational(qg.rate[c])}", f"m={qg.multiplicity[c]}",
                           "members=" + ",".join(qg.members[c]))
            lines.append(f"  {_q(c)} [shape=circle, label={_q(label)}];")
        for a, b in qg.edges:
            lines.append(f"  {_q(a)} -- {_q(b)};")
        for c in qg.classes:
            _stubs(lines, c, "P", qg.arrows[c])
    else:
        ew = _require(report.eggers_wall, stage)
        for n in ew.nodes.values():
            if n.kind == "leaf":
                lines.append(f"  {_q(n.id)} [shape=plaintext, label={_q(n.id)}];")
            else:
                e = f"e={fmt_rational(n.e)}" if n.decorated else ""
                label = _label(n.id, e, f"m={n.multiplicity}")
                lines.append(f"  {_q(n.id)} [shape=circle, label={_q(label)}];")
        for e in ew.edges:
            lines.append(f"  {_q(e.parent)} -- {_q(e.child)} [label={_q(f'i={e.i}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _require(value, stage):
    if value is None:
        raise ValueError(f"stage {stage!r} is absent from this report")
    return value
