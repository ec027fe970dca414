"""Summary causal graphs and the macro-level predicates used by the theory."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .exceptions import GraphValidationError, IncompatibleSCGError
from .graph import TemplateEdge, TemplateGraph, _is_acyclic, default_names


@dataclass(frozen=True)
class SCG:
    """Summary causal graph over ``n_series`` series.

    The adjacency matrix is packed row-major into ``mask``: bit ``u * n + v``
    is set iff S_u -> S_v (the diagonal holds self-loops).
    """

    n_series: int
    mask: int = 0
    names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.n_series
        if n < 0:
            raise GraphValidationError("n_series must be non-negative")
        if self.mask < 0 or self.mask >> (n * n):
            raise GraphValidationError("mask has bits outside the n x n matrix")
        if self.names is not None and len(self.names) != n:
            raise GraphValidationError("names must have one entry per series")

    @classmethod
    def from_edges(cls, n_series, edges, names=None):
        mask = 0
        for u, v in edges:
            if not (0 <= u < n_series and 0 <= v < n_series):
                raise GraphValidationError(f"edge ({u}, {v}) references an unknown series")
            mask |= 1 << (u * n_series + v)
        return cls(n_series, mask, names)

    @classmethod
    def from_matrix(cls, adj, names=None):
        n = len(adj)
        mask = 0
        for u, row in enumerate(adj):
            if len(row) != n:
                raise GraphValidationError("adjacency matrix must be square")
            for v, present in enumerate(row):
                if present:
                    mask |= 1 << (u * n + v)
        return cls(n, mask, names)

    def has_edge(self, u, v):
        self._check(u)
        self._check(v)
        return bool((self.mask >> (u * self.n_series + v)) & 1)

    @property
    def adj(self):
        n = self.n_series
        return tuple(
            tuple(bool((self.mask >> (u * n + v)) & 1) for v in range(n)) for u in range(n)
        )

    def edges(self):
        n = self.n_series
        return [(u, v) for u in range(n) for v in range(n) if (self.mask >> (u * n + v)) & 1]

    @property
    def series_names(self):
        return self.names if self.names is not None else default_names(self.n_series)

    def _check(self, x):
        if not (0 <= x < self.n_series):
            raise GraphValidationError(f"series index {x} out of range")


def scg_of(template):
    """SCG summarizing ``template``: S_u -> S_v iff some (u, lag, v) edge exists."""
    return SCG.from_edges(
        template.n_series, {(e.source, e.target) for e in template.edges}, template.names
    )


def is_bidirected(scg, x, y):
    return scg.has_edge(x, y) and scg.has_edge(y, x)


def has_self_loop(scg, x):
    return scg.has_edge(x, x)


def adjacent(scg, x, y):
    return scg.has_edge(x, y) or scg.has_edge(y, x)


def neighbors(scg, x):
    scg._check(x)
    return {z for z in range(scg.n_series) if z != x and adjacent(scg, x, z)}


READINGS = ("theorem", "any-arrowhead")


def unshielded_collider_exists(scg, x, y, reading="theorem"):
    """Whether a third series z forms an unshielded collider with the pair (x, y).

    With x <-> y both endpoints already carry an arrowhead, so the midpoint
    is x or y and z must point into it. Under the default ``"theorem"``
    reading z qualifies iff it points into exactly one of x, y: a micro edge
    Z -> Y_t is then either unshielded w.r.t. X_t, or shielded only through
    X_t -> Z_t, which orients X_t -> Y_t by acyclicity. When z points into
    both, Z_t can shield every triple and X_t - Y_t may stay undirected.
    This is the reading confirmed by exhaustive template enumeration.

    ``"any-arrowhead"`` accepts any z pointing into x or y; it reproduces
    the reference census counts but disagrees with the enumeration when z
    points into both endpoints.
    """
    scg._check(x)
    scg._check(y)
    if x == y:
        raise GraphValidationError("x and y must be distinct")
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}; expected one of {READINGS}")
    for z in range(scg.n_series):
        if z == x or z == y:
            continue
        into_x = scg.has_edge(z, x)
        into_y = scg.has_edge(z, y)
        if reading == "theorem":
            if into_x != into_y:
                return True
        elif into_x or into_y:
            return True
    return False


def compatible(scg, template):
    if scg.n_series != template.n_series:
        raise IncompatibleSCGError(
            f"SCG has {scg.n_series} series but the template has {template.n_series}"
        )
    return scg_of(template).mask == scg.mask


def _slot_choices(scg, gamma_max):
    """Per SCG edge (row-major), the list of nonempty lag subsets as tuples."""
    per_edge = []
    for u, v in scg.edges():
        lags = range(1 if u == v else 0, gamma_max + 1)
        slots = [TemplateEdge(u, lag, v) for lag in lags]
        subsets = []
        for bits in range(1, 1 << len(slots)):
            subsets.append(tuple(s for i, s in enumerate(slots) if (bits >> i) & 1))
        per_edge.append(subsets)
    return per_edge


def count_candidate_templates(scg, gamma_max):
    """Upper bound on compatible templates (before the acyclicity filter)."""
    total = 1
    for subsets in _slot_choices(scg, gamma_max):
        total *= len(subsets)
    return total


def enumerate_compatible_templates(scg, gamma_max):
    """Yield every template with lags <= ``gamma_max`` whose SCG is exactly ``scg``.

    Order: lexicographic over the per-edge slot-subset bitmask, SCG edges in
    row-major order (the last edge varies fastest).
    """
    if gamma_max < 1:
        raise GraphValidationError("gamma_max must be at least 1")
    n = scg.n_series
    for combo in itertools.product(*_slot_choices(scg, gamma_max)):
        edges = [e for subset in combo for e in subset]
        inst = [(e.source, e.target) for e in edges if e.lag == 0]
        if _is_acyclic(n, inst):
            yield TemplateGraph(n, frozenset(edges), scg.names)


def lag_one_template(scg):
    """The compatible template that realizes every SCG edge with lag 1 only."""
    return TemplateGraph(
        scg.n_series, frozenset(TemplateEdge(u, 1, v) for u, v in scg.edges()), scg.names
    )
