from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import Rational
from sympy.ntheory.continued_fraction import continued_fraction as sympy_cf

from lnegraph.cycles import lne_cycle_data
from lnegraph.errors import InvariantViolation
from lnegraph.graph import WeightedGraph, apply_incidence
from lnegraph.io import load_example
from lnegraph.nash import (RefinedGraph, continued_fraction, default_cap, edge_needs_blowup,
                           incoming_edge_count, interior_p_node_rate, local_degree, nash_refine,
                           p_nodes, predicted_blowups)
from lnegraph.rates import edge_length, inner_rates

from .support import accepted_runs


def _refine(G, **kw):
    data = lne_cycle_data(G)
    return nash_refine(G, data, inner_rates(G, data), **kw)


def test_a2_refinement():
    r = _refine(load_example("a2_minimal"))
    g = r.graph
    assert g.ids == ("v0", "v0p", "b1")
    assert [v.self_int for v in g.vertices] == [-3, -3, -1]
    assert r.cycle_data.multiplicities == {"v0": 1, "v0p": 1, "b1": 2}
    assert r.rates.rates == {"v0": 1, "v0p": 1, "b1": F(3, 2)}
    assert r.p_vector == {"v0": 0, "v0p": 0, "b1": 1}
    assert r.p_nodes == {"b1"}
    assert r.blowups == 1
    assert r.provenance["b1"].parent_edge == "e0"
    assert r.provenance["b1"].position == F(1, 2)
    assert incoming_edge_count(g, r.rates, "b1") == 2
    assert local_degree(g, r.cycle_data, r.rates, "b1") == 2


def test_cusp_is_left_alone():
    G = load_example("cusp_x5y5z5")
    r = _refine(G)
    assert r.blowups == 0
    assert r.graph == G
    assert r.p_nodes == {"w1", "w2", "w3"}
    assert r.local_degrees == {"v1": 1, "v2": 1, "v3": 1, "w1": 2, "w2": 2, "w3": 2}
    assert incoming_edge_count(G, r.rates, "v1") == 0


def test_single_vertex_is_left_alone():
    G = load_example("cone_twisted_cubic")
    r = _refine(G)
    assert r.blowups == 0 and r.graph == G
    assert r.p_vector == {"c": 4}


def test_star_with_heavy_center():
    G = WeightedGraph.build([("c", 0, -6), ("a", 0, -2), ("b", 0, -2), ("d", 0, -2)],
                            [("c", "a"), ("c", "b"), ("c", "d")])
    data = lne_cycle_data(G)
    assert data.l("c") == 3
    assert p_nodes(G, data, inner_rates(G, data)) == {"c"}


def test_edge_checks():
    assert edge_needs_blowup(1, 1, 1, 1)
    assert not edge_needs_blowup(1, 1, F(3, 2), 2)
    assert not edge_needs_blowup(1, 1, 2, 1)
    assert interior_p_node_rate(1, 1, 1) == F(3, 2)
    assert interior_p_node_rate(1, F(3, 2), 1) == F(7, 4)
    with pytest.raises(ValueError):
        interior_p_node_rate(1, 2, 1)


def test_predictions_on_small_cases():
    assert predicted_blowups(1, 1, 1, 1) == 1
    assert predicted_blowups(1, 1, 1, 2) == 0
    # the peak sits at distance 2/3 from the first endpoint, on the vertex of
    # multiplicity 1 + 2, two blowups deep
    assert predicted_blowups(1, 1, 1, F(4, 3)) == 2


@given(st.fractions(min_value=F(1, 50), max_value=50))
def test_continued_fraction_matches_sympy(x):
    assert continued_fraction(x) == list(sympy_cf(Rational(x.numerator, x.denominator)))


def test_cap_is_enforced(monkeypatch):
    G = load_example("a2_minimal")
    with pytest.raises(InvariantViolation) as exc:
        _refine(G, cap=0)
    assert exc.value.diagnostic["expected"] == 1
    monkeypatch.setenv("LNE_BLOWUP_CAP", "0")
    assert default_cap() == 0
    with pytest.raises(InvariantViolation):
        _refine(G)
    monkeypatch.delenv("LNE_BLOWUP_CAP")
    assert default_cap() == 10_000


def _refined_runs():
    return [r.refined for r in accepted_runs(300)[0]]


def test_refined_edges_are_tight_and_refinement_is_idempotent():
    for r in _refined_runs():
        g, q = r.graph, r.rates
        for e in g.edges:
            assert abs(q.q(e.u) - q.q(e.v)) == edge_length(q.m(e.u), q.m(e.v))
        # the refined multiplicities are the refined graph's own Z_min
        fresh = lne_cycle_data(g)
        assert fresh == r.cycle_data
        again = nash_refine(g, fresh, inner_rates(g, fresh))
        assert isinstance(again, RefinedGraph)
        assert again.graph == g and again.blowups == 0
        assert again.p_vector == r.p_vector


def test_multiplicity_conservation_on_refined_graphs():
    for r in _refined_runs():
        g, m = r.graph, r.cycle_data.multiplicities
        im = apply_incidence(g, m)
        assert im == {v: -r.cycle_data.l(v) for v in g.ids}
        assert all(r.cycle_data.l(w) == 0 for w in r.provenance)


def test_local_degree_detects_p_nodes_off_the_l_nodes():
    for r in _refined_runs():
        for v in r.graph.ids:
            if v not in r.cycle_data.l_nodes:
                assert (r.local_degrees[v] > 1) == (v in r.p_nodes)


def test_provenance_positions_lie_inside_the_parent_edge():
    for run in accepted_runs(300)[0]:
        G, r = run.graph, run.refined
        m = run.cycle_data.multiplicities
        for w, pv in r.provenance.items():
            e = G.edge(pv.parent_edge)
            assert 0 < pv.position < edge_length(m[e.u], m[e.v])
            # the position is the metric distance from the first endpoint
            # along the edge, so the rate there is 1-Lipschitz from q(e.u)
            assert abs(r.rates.q(w) - r.rates.q(e.u)) <= pv.position
