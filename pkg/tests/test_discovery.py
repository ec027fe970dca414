import pytest
from hypothesis import given, settings

from scgident.discovery import (
    ftmpdag_of,
    interior_view,
    meek_closure,
    orient_query,
    present_orientation,
    tpc,
)
from scgident.exceptions import IncompatibleSCGError, InconsistentOrientationError
from scgident.graph import PDAG, Orientation, Vertex, template_from_edges, unroll
from scgident.summary import SCG, scg_of
from scgident.textio import read_scg, read_template
from strategies import templates

F, Bk, U = Orientation.FORWARD, Orientation.BACKWARD, Orientation.UNDIRECTED


def test_meek_rule1():
    p = PDAG(3, 1, frozenset({(0, 1)}), frozenset({(1, 2)}))
    assert meek_closure(p).directed == {(0, 1), (1, 2)}


def test_meek_rule2():
    p = PDAG(3, 1, frozenset({(0, 1), (1, 2)}), frozenset({(0, 2)}))
    assert (0, 2) in meek_closure(p).directed


def test_meek_undirected_triangle_unchanged():
    p = PDAG(3, 1, frozenset(), frozenset({(0, 1), (1, 2), (0, 2)}))
    assert meek_closure(p) == p


def test_meek_rule3():
    # a - c, a - d, a - b, c -> b <- d, c and d non-adjacent
    p = PDAG(4, 1, frozenset({(2, 1), (3, 1)}), frozenset({(0, 1), (0, 2), (0, 3)}))
    assert (0, 1) in meek_closure(p).directed
    assert (0, 1) not in meek_closure(p, "first-only").directed


def test_meek_rule4():
    # a - b, c -> d -> b, c not adjacent to b, a adjacent to c and d
    a, b, c, d = 0, 1, 2, 3
    p = PDAG(4, 1, frozenset({(c, d), (d, b)}), frozenset({(a, b), (a, c), (a, d)}))
    assert (a, b) in meek_closure(p).directed


def test_meek_cycle_reported():
    p = PDAG(3, 1, frozenset({(0, 1), (1, 2), (2, 0)}), frozenset())
    with pytest.raises(InconsistentOrientationError):
        meek_closure(p)


@given(templates(max_n=3, max_lag=1))
@settings(max_examples=40, deadline=None)
def test_meek_idempotent_and_monotone(t):
    from scgident.graph import dag_to_cpdag

    p = dag_to_cpdag(unroll(t, 3))
    q = meek_closure(p)
    assert p.directed <= q.directed
    assert meek_closure(q) == q
    assert p.skeleton() == q.skeleton()


def _fig(fixture_path, scg_file, tpl_file):
    s = read_scg(fixture_path(scg_file))
    t = read_template(fixture_path(tpl_file), s.series_names)
    return s, t


# (scg, template, {(x, y): orientation at every interior slice})
FIGURES = [
    ("fig2a.scg", "fig2b.tpl", {(0, 1): Bk}),
    ("fig2a.scg", "fig2c.tpl", {(0, 1): Bk}),
    ("fig2d.scg", "fig2e.tpl", {(0, 1): F}),
    ("fig2d.scg", "fig2f.tpl", {(0, 1): Bk}),
    ("fig3a.scg", "fig3b.tpl", {(0, 1): Bk, (1, 2): Bk}),
    ("fig3a.scg", "fig3c.tpl", {(0, 1): F}),
    ("fig4a.scg", "fig4d.tpl", {(0, 1): U}),
    ("fig4b.scg", "fig4e.tpl", {(0, 1): U}),
    ("fig4c.scg", "fig4f.tpl", {(0, 1): U}),
    ("fig6a.scg", "fig6b.tpl", {(0, 1): U, (1, 2): F, (2, 3): F}),
    ("fig6a.scg", "fig6c.tpl", {(0, 1): F, (1, 2): F, (2, 3): F}),
    ("fig1a.scg", "fig1b.tpl", {(0, 1): Bk, (0, 2): F}),
    ("fig1a.scg", "fig1c.tpl", {(0, 2): Bk}),
]


@pytest.mark.parametrize("scg_file,tpl_file,expected", FIGURES)
def test_figure_orientations(fixture_path, scg_file, tpl_file, expected):
    s, t = _fig(fixture_path, scg_file, tpl_file)
    g = unroll(t)
    for method in ("tpc", "mec"):
        p = tpc(g, s) if method == "tpc" else ftmpdag_of(t, s)
        for k in range(t.gamma_max, p.window_len):
            for (x, y), o in expected.items():
                assert orient_query(p, Vertex(x, k), Vertex(y, k)) is o, (method, k, x, y)


def test_fig4c_drawn_is_identifiable(fixture_path):
    from scgident.identifiability import s_identifiable

    assert s_identifiable(read_scg(fixture_path("fig4c_drawn.scg")), 0, 1).identifiable


def test_no_instantaneous_edges_fully_directed():
    t = template_from_edges(2, [(0, 1, 1), (1, 1, 0), (0, 1, 0)])
    g = unroll(t)
    p = tpc(g, scg_of(t))
    assert p.directed == g.edges and not p.undirected


def test_empty_template():
    t = template_from_edges(2, [])
    p = ftmpdag_of(t, SCG(2))
    assert not p.directed and not p.undirected


def test_incompatible_scg_rejected():
    t = template_from_edges(2, [(0, 0, 1)])
    with pytest.raises(IncompatibleSCGError):
        tpc(unroll(t), SCG(2))
    with pytest.raises(IncompatibleSCGError):
        ftmpdag_of(t, SCG(2))


def test_orient_query():
    p = PDAG(2, 1, frozenset({(0, 1)}), frozenset())
    assert orient_query(p, Vertex(0, 0), Vertex(1, 0)) is F
    assert orient_query(PDAG(2, 1), Vertex(0, 0), Vertex(1, 0)) is Orientation.ABSENT


@given(templates(max_n=3, max_lag=1))
@settings(max_examples=60, deadline=None)
def test_tpc_properties(t):
    g = unroll(t)
    s = scg_of(t)
    p = tpc(g, s)
    n, gamma = t.n_series, t.gamma_max
    assert p.skeleton() == g.skeleton()
    assert p.directed <= g.edges
    for u, v in g.edges:
        if u // n != v // n:
            assert (u, v) in p.directed
    first = max(gamma, 1)
    for x in range(n):
        for y in range(x + 1, n):
            seen = {orient_query(p, Vertex(x, k), Vertex(y, k)) for k in range(first, p.window_len)}
            assert len(seen) == 1
    assert interior_view(p, gamma) == interior_view(ftmpdag_of(t, s), gamma)


@given(templates(max_n=3, max_lag=2))
@settings(max_examples=30, deadline=None)
def test_tpc_matches_mec_with_longer_lags(t):
    s = scg_of(t)
    p = tpc(unroll(t), s)
    assert interior_view(p, t.gamma_max) == interior_view(ftmpdag_of(t, s), t.gamma_max)


@pytest.mark.parametrize("scg_file,tpl_file,expected", FIGURES[:6])
def test_first_rule_suffices_on_fig2_fig3(fixture_path, scg_file, tpl_file, expected):
    s, t = _fig(fixture_path, scg_file, tpl_file)
    g = unroll(t)
    gamma = t.gamma_max
    assert interior_view(tpc(g, s, "first-only"), gamma) == interior_view(tpc(g, s), gamma)


def test_unknown_rule_set():
    with pytest.raises(ValueError):
        meek_closure(PDAG(1, 1), "some")


def test_rule_two_needed_for_shielded_rescue():
    # X <-> Y with self-loops, Y -> Z -> X: Z points into X only, but the
    # triangle is shielded, so only acyclicity orients Y_t -> X_t
    s = SCG.from_edges(3, [(0, 0), (1, 1), (0, 1), (1, 0), (1, 2), (2, 0)])
    t = template_from_edges(3, [(0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 1, 0), (1, 1, 1),
                                (1, 0, 2), (2, 0, 0)])
    g = unroll(t)
    assert present_orientation(tpc(g, s), 0, 1) is Bk
    assert present_orientation(tpc(g, s, "first-only"), 0, 1) is U
