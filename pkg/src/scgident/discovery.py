"""Oracle temporal PC with summary-graph background knowledge.

Conditional independence is answered by d-separation in a ground-truth
window, so the output is the FT-MPDAG of the truth (no sampling error).
"""

from __future__ import annotations

import itertools
import logging

from . import _meek
from .exceptions import IncompatibleSCGError, InconsistentOrientationError
from .graph import (
    PDAG,
    Orientation,
    dag_to_cpdag,
    DSeparationOracle,
    default_window,
    edge_status,
    unroll,
)
from .summary import compatible, scg_of

logger = logging.getLogger(__name__)

RULE_SETS = {"all": _meek.ALL_RULES, "first-only": _meek.FIRST_ONLY}


def _rules(rules):
    if isinstance(rules, str):
        try:
            return RULE_SETS[rules]
        except KeyError:
            raise ValueError(f"unknown rule set {rules!r}; use 'all' or 'first-only'") from None
    return tuple(rules)


def _propagate_stationarity(state, n, window_len, interior_from):
    """Copy instantaneous orientations across interior slices."""
    changed = False
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            ids = [(k * n + a, k * n + b) for k in range(interior_from, window_len)]
            if any(v in state.ch[u] for u, v in ids):
                for u, v in ids:
                    if v in state.und[u]:
                        changed |= state.orient(u, v)
    return changed


def _scg_rule(state, scg, n, window_len, interior_from):
    """Orient X_k - Y_k as X_k -> Y_k when S_X -> S_Y has no other witness into Y_k."""
    changed = False
    for k in range(interior_from, window_len):
        base = k * n
        for x in range(n):
            for y in range(x + 1, n):
                u, v = base + x, base + y
                if v not in state.und[u]:
                    continue
                fwd = scg.has_edge(x, y) and not any(
                    p % n == x for p in state.pa[v]
                )
                bwd = scg.has_edge(y, x) and not any(
                    p % n == y for p in state.pa[u]
                )
                if fwd and bwd:
                    raise InconsistentOrientationError(
                        f"summary graph forces both directions between series {x} and {y}"
                    )
                if fwd:
                    changed |= state.orient(u, v)
                elif bwd:
                    changed |= state.orient(v, u)
    return changed


def _close(state, scg, n, window_len, interior_from, rules):
    while True:
        changed = _meek.apply_rules(state, rules)
        if interior_from is not None:
            changed |= _propagate_stationarity(state, n, window_len, interior_from)
            if scg is not None:
                changed |= _scg_rule(state, scg, n, window_len, interior_from)
        if not changed:
            break
    state.check_acyclic()


def meek_closure(p, rules="all", *, scg=None, interior_from=None):
    """Close ``p`` under Meek's rules.

    With ``interior_from`` set, orientations of instantaneous edges are also
    copied among slices ``>= interior_from``; if ``scg`` is given as well the
    summary-graph contradiction rule is applied at those slices. Raises
    :class:`InconsistentOrientationError` if the orientations become cyclic.
    """
    state = _meek.OrientationState(p.n_vertices, p.directed, p.undirected)
    _close(state, scg, p.n_series, p.window_len, interior_from, _rules(rules))
    return PDAG(p.n_series, p.window_len, state.directed_edges(), state.undirected_edges(), p.names)


def _orient_background(state, scg, n):
    """Lagged edges point to the present; S_X -> S_Y only fixes X_k -> Y_k."""
    for u in range(state.n):
        for v in sorted(state.und[u]):
            if v < u:
                continue
            su, sv = u // n, v // n
            if su != sv:
                state.orient(u, v)
                continue
            x, y = u % n, v % n
            xy = scg.has_edge(x, y)
            yx = scg.has_edge(y, x)
            if xy and not yx:
                state.orient(u, v)
            elif yx and not xy:
                state.orient(v, u)


def _interior_from(gamma_max):
    return gamma_max


def _check_truth(truth, scg):
    if scg.n_series != truth.n_series:
        raise IncompatibleSCGError("SCG and graph have different numbers of series")
    n = truth.n_series
    found = set()
    for u, v in truth.edges:
        found.add((u % n, v % n))
    if found != set(scg.edges()):
        raise IncompatibleSCGError("the SCG does not summarize the ground-truth graph")


def tpc(truth, scg, rules="all", *, gamma_max=None):
    """Run oracle tPC on ``truth`` with ``scg`` as background knowledge.

    ``gamma_max`` marks where interior slices begin; it defaults to the
    largest lag present in ``truth``.
    """
    _check_truth(truth, scg)
    n = truth.n_series
    nv = truth.n_vertices
    gamma = truth.gamma_max if gamma_max is None else gamma_max
    slice_of = truth.slice_of

    oracle = DSeparationOracle(truth)
    adj = [set(range(nv)) - {v} for v in range(nv)]
    sepset = {}
    level = 0
    while True:
        any_big = False
        for x in range(nv):
            for y in sorted(adj[x]):
                if y < x or y not in adj[x]:
                    continue
                horizon = max(slice_of(x), slice_of(y))
                for a, b in ((x, y), (y, x)):
                    cands = sorted(w for w in adj[a] if w != b and slice_of(w) <= horizon)
                    if len(cands) < level:
                        continue
                    if len(cands) > level:
                        any_big = True
                    hit = None
                    for cond in itertools.combinations(cands, level):
                        zmask = 0
                        for w in cond:
                            zmask |= 1 << w
                        if oracle.separated(x, y, zmask):
                            hit = cond
                            break
                    if hit is not None:
                        adj[x].discard(y)
                        adj[y].discard(x)
                        sepset[(x, y)] = frozenset(hit)
                        break
        if not any_big:
            break
        level += 1

    undirected = {(u, v) for u in range(nv) for v in adj[u] if u < v}
    state = _meek.OrientationState(nv, (), undirected)
    _orient_background(state, scg, n)

    for c in range(nv):
        nbrs = sorted(adj[c])
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if b in adj[a]:
                    continue
                if c in sepset[(a, b)]:
                    continue
                for end in (a, b):
                    if c in state.pa[end]:
                        raise InconsistentOrientationError(
                            f"collider at {c} conflicts with an existing orientation"
                        )
                    if end in state.und[c]:
                        state.orient(end, c)

    _close(state, scg, n, truth.window_len, _interior_from(gamma), _rules(rules))
    return PDAG(n, truth.window_len, state.directed_edges(), state.undirected_edges(), truth.names)


def ftmpdag_of(template, scg, window_len=None, rules="all"):
    """FT-MPDAG built from the Markov equivalence class of the unrolled template."""
    if not compatible(scg, template):
        raise IncompatibleSCGError("the SCG does not summarize the template")
    if window_len is None:
        window_len = default_window(template.gamma_max)
    g = unroll(template, window_len)
    cpdag = dag_to_cpdag(g)
    state = _meek.OrientationState(g.n_vertices, cpdag.directed, cpdag.undirected)
    _orient_background(state, scg, g.n_series)
    _close(state, scg, g.n_series, window_len, _interior_from(template.gamma_max), _rules(rules))
    return PDAG(g.n_series, window_len, state.directed_edges(), state.undirected_edges(), g.names)


def orient_query(p, x, y):
    """Four-valued status of the pair (x, y) in ``p``."""
    a = p.index(x)
    b = p.index(y)
    if a == b:
        raise ValueError("x and y must be distinct")
    return edge_status(p.directed, p.undirected, a, b)


def present_orientation(p, x, y):
    """Orientation between series ``x`` and ``y`` at the last slice."""
    k = p.window_len - 1
    return orient_query(p, (x, k), (y, k))


def interior_view(p, gamma_max):
    """Edges whose endpoints both lie in slices ``>= gamma_max``."""
    return p.restrict(gamma_max)


__all__ = [
    "Orientation",
    "meek_closure",
    "tpc",
    "ftmpdag_of",
    "orient_query",
    "present_orientation",
    "interior_view",
    "scg_of",
]
