import itertools

import pytest
from hypothesis import given, settings

from scgident.discovery import ftmpdag_of, present_orientation
from scgident.graph import Orientation, unroll, dag_to_cpdag
from scgident.identifiability import (
    MacroPair,
    Reason,
    Verdict,
    all_pairs,
    cde_identifiable,
    fully_identifiable,
    s_identifiable,
    total_effect_identifiable,
)
from scgident.summary import SCG, enumerate_compatible_templates, lag_one_template
from scgident.exceptions import GraphValidationError
from scgident.textio import read_scg
from strategies import scgs

A, B, C, D = range(4)


@pytest.fixture
def fig6a(fixture_path):
    return read_scg(fixture_path("fig6a.scg"))


def test_fig6_pairs(fig6a):
    r = s_identifiable(fig6a, A, B)
    assert (r.verdict, r.reason) == (Verdict.NOT_SID, Reason.THEOREM_BLOCKED)
    r = s_identifiable(fig6a, C, D)
    assert (r.verdict, r.reason) == (Verdict.SID, Reason.UNSHIELDED_COLLIDER)
    assert s_identifiable(fig6a, B, C).reason is Reason.DIRECTED_EDGE
    assert s_identifiable(fig6a, A, D).reason is Reason.NO_ADJACENCY


def test_fig2a_no_double_self_loop(fixture_path):
    r = s_identifiable(read_scg(fixture_path("fig2a.scg")), 0, 1)
    assert (r.verdict, r.reason) == (Verdict.SID, Reason.NO_DOUBLE_SELF_LOOP)


def test_report_format(fig6a):
    assert s_identifiable(fig6a, B, A).format(fig6a.series_names) == "PAIR A B NotSId TheoremBlocked"


def test_pair_validation():
    with pytest.raises(GraphValidationError):
        MacroPair(1, 1)
    with pytest.raises(GraphValidationError):
        s_identifiable(SCG(2), 0, 2)


@given(scgs(max_n=4, min_n=2))
@settings(max_examples=200, deadline=None)
def test_symmetry_and_reason_invariant(s):
    for x, y in itertools.combinations(range(s.n_series), 2):
        a, b = s_identifiable(s, x, y), s_identifiable(s, y, x)
        assert a == b
        assert (a.verdict is Verdict.NOT_SID) == (a.reason is Reason.THEOREM_BLOCKED)


@given(scgs(max_n=3, min_n=2))
@settings(max_examples=200, deadline=None)
def test_collider_rescue(s):
    # append a fresh series pointing only into y
    n = s.n_series
    for x, y in itertools.combinations(range(n), 2):
        if s_identifiable(s, x, y).verdict is not Verdict.NOT_SID:
            continue
        edges = s.edges() + [(n, y)]
        bigger = SCG.from_edges(n + 1, edges)
        assert s_identifiable(bigger, x, y).reason is Reason.UNSHIELDED_COLLIDER


def test_effects_fig6(fig6a):
    assert total_effect_identifiable(fig6a, C)
    d = total_effect_identifiable(fig6a, A)
    assert not d and d.blocking == (MacroPair(A, B),)
    assert cde_identifiable(fig6a, D)


def test_effects_fig4a_and_isolated(fixture_path):
    s = read_scg(fixture_path("fig4a.scg"))
    d = cde_identifiable(s, 1)
    assert not d and d.blocking == (MacroPair(0, 1),)
    iso = SCG.from_edges(3, [(0, 1)])
    assert total_effect_identifiable(iso, 2) and cde_identifiable(iso, 2)


@pytest.mark.parametrize("mask", range(16))
def test_soundness_and_completeness_n2(mask):
    s = SCG(2, mask)
    r = s_identifiable(s, 0, 1)
    outcomes = {present_orientation(ftmpdag_of(t, s), 0, 1)
                for t in enumerate_compatible_templates(s, 1)}
    assert (Orientation.UNDIRECTED not in outcomes) == r.identifiable


@given(scgs(max_n=4))
@settings(max_examples=40, deadline=None)
def test_lag_one_template_fully_directed(s):
    p = ftmpdag_of(lag_one_template(s), s)
    assert not p.undirected


def test_fully_identifiable(fig6a, fixture_path):
    assert not fully_identifiable(fig6a)
    assert fully_identifiable(read_scg(fixture_path("fig2a.scg")))
    assert len(all_pairs(fig6a)) == 6


def _reverse_instantaneous(template, x, y):
    from scgident.graph import TemplateEdge, TemplateGraph

    edges = set(template.edges)
    edges.discard(TemplateEdge(x, 0, y))
    edges.add(TemplateEdge(y, 0, x))
    return TemplateGraph(template.n_series, frozenset(edges), template.names)


@pytest.mark.parametrize("scg_file,tpl_file", [
    ("fig4a.scg", "fig4d.tpl"), ("fig4b.scg", "fig4e.tpl"), ("fig4c.scg", "fig4f.tpl"),
])
def test_blocked_pair_reversal_witness(fixture_path, scg_file, tpl_file):
    # reversing X_t -> Y_t gives a template with the same SCG and the same
    # skeleton and colliders, so no procedure can orient the edge
    from oracles import markov_equivalent
    from scgident.summary import scg_of
    from scgident.textio import read_template

    s = read_scg(fixture_path(scg_file))
    t = read_template(fixture_path(tpl_file), s.series_names)
    t2 = _reverse_instantaneous(t, 0, 1)
    assert scg_of(t2).mask == s.mask
    g1, g2 = unroll(t), unroll(t2)
    assert markov_equivalent(g1.edges, g2.edges)
    assert s_identifiable(s, 0, 1).verdict is Verdict.NOT_SID
