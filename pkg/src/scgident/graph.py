"""Micro-level graphs: stationary templates, unrolled windows and PDAGs.

Vertices of a window are numbered ``slice * n_series + series`` so that the
natural integer order is the canonical (slice, series) order. The public
functions accept :class:`Vertex` pairs; integer ids are an internal detail
exposed through :meth:`UnrolledGraph.index` for speed-sensitive callers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from . import _meek
from .exceptions import GraphValidationError, WindowTooSmallError


class Vertex(NamedTuple):
    series: int
    slice: int


class TemplateEdge(NamedTuple):
    """``source`` at time t - lag causes ``target`` at time t."""

    source: int
    lag: int
    target: int


class Orientation(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"
    ABSENT = "absent"
    UNDIRECTED = "undirected"


def _is_acyclic(n, edges):
    children = [[] for _ in range(n)]
    indeg = [0] * n
    for u, v in edges:
        children[u].append(v)
        indeg[v] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                stack.append(c)
    return seen == n


def default_names(n):
    letters = "XYZWVUTSRQ"
    if n <= len(letters):
        return tuple(letters[:n])
    return tuple(f"S{i}" for i in range(n))


@dataclass(frozen=True)
class TemplateGraph:
    """A stationary FT-DAG given by its lagged edge template."""

    n_series: int
    edges: frozenset = field(default_factory=frozenset)
    names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_series < 0:
            raise GraphValidationError("n_series must be non-negative")
        edges = frozenset(TemplateEdge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for e in edges:
            if not (0 <= e.source < self.n_series and 0 <= e.target < self.n_series):
                raise GraphValidationError(f"edge {e} references an unknown series")
            if e.lag < 0:
                raise GraphValidationError(f"edge {e} has a negative lag")
            if e.lag == 0 and e.source == e.target:
                raise GraphValidationError(
                    f"instantaneous self-edge on series {e.source} is not allowed"
                )
        inst = [(e.source, e.target) for e in edges if e.lag == 0]
        if not _is_acyclic(self.n_series, inst):
            raise GraphValidationError("the instantaneous (lag 0) subgraph has a cycle")
        if self.names is not None and len(self.names) != self.n_series:
            raise GraphValidationError("names must have one entry per series")

    @property
    def gamma_max(self):
        return max((e.lag for e in self.edges), default=0)

    @property
    def series_names(self):
        return self.names if self.names is not None else default_names(self.n_series)

    def sorted_edges(self):
        return sorted(self.edges, key=lambda e: (e.source, e.target, e.lag))


@dataclass(frozen=True)
class UnrolledGraph:
    """A finite window of a stationary FT-DAG.

    ``edges`` holds integer vertex pairs; use :meth:`vertex_edges` for the
    :class:`Vertex` view.
    """

    n_series: int
    window_len: int
    edges: frozenset
    names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.n_vertices
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u}, {v}) out of range")
            if self.slice_of(u) > self.slice_of(v):
                raise GraphValidationError("edges must not point into the past")
        if not _is_acyclic(n, self.edges):
            raise GraphValidationError("unrolled graph has a directed cycle")

    @property
    def n_vertices(self):
        return self.n_series * self.window_len

    def index(self, v):
        series, sl = v
        if not (0 <= series < self.n_series and 0 <= sl < self.window_len):
            raise GraphValidationError(f"vertex {tuple(v)} is outside the window")
        return sl * self.n_series + series

    def vertex(self, i):
        return Vertex(i % self.n_series, i // self.n_series)

    def slice_of(self, i):
        return i // self.n_series

    def series_of(self, i):
        return i % self.n_series

    def vertices(self):
        return [self.vertex(i) for i in range(self.n_vertices)]

    def vertex_edges(self):
        return {(self.vertex(u), self.vertex(v)) for u, v in self.edges}

    @cached_property
    def parent_masks(self):
        masks = [0] * self.n_vertices
        for u, v in self.edges:
            masks[v] |= 1 << u
        return tuple(masks)

    @cached_property
    def child_masks(self):
        masks = [0] * self.n_vertices
        for u, v in self.edges:
            masks[u] |= 1 << v
        return tuple(masks)

    @cached_property
    def gamma_max(self):
        return max((self.slice_of(v) - self.slice_of(u) for u, v in self.edges), default=0)

    def skeleton(self):
        return frozenset(frozenset(e) for e in self.edges)


@dataclass(frozen=True)
class PDAG:
    """Partially directed graph over the vertices of a window.

    ``directed`` holds ``(u, v)`` for u -> v, ``undirected`` holds ``(u, v)``
    with ``u < v``.
    """

    n_series: int
    window_len: int
    directed: frozenset = field(default_factory=frozenset)
    undirected: frozenset = field(default_factory=frozenset)
    names: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        und = frozenset((min(u, v), max(u, v)) for u, v in self.undirected)
        object.__setattr__(self, "undirected", und)
        object.__setattr__(self, "directed", frozenset(self.directed))
        seen = set()
        for u, v in list(self.directed) + list(und):
            key = (min(u, v), max(u, v))
            if u == v:
                raise GraphValidationError("self-edges are not allowed")
            if key in seen:
                raise GraphValidationError(f"more than one edge between {u} and {v}")
            seen.add(key)
        n = self.n_series
        for u, v in self.directed:
            if u // n > v // n:
                raise GraphValidationError("directed edges must not point into the past")

    @property
    def n_vertices(self):
        return self.n_series * self.window_len

    def index(self, v):
        series, sl = v
        if not (0 <= series < self.n_series and 0 <= sl < self.window_len):
            raise GraphValidationError(f"vertex {tuple(v)} is outside the window")
        return sl * self.n_series + series

    def vertex(self, i):
        return Vertex(i % self.n_series, i // self.n_series)

    def skeleton(self):
        return frozenset(frozenset(e) for e in self.directed | self.undirected)

    def restrict(self, min_slice):
        """Sub-PDAG induced by slices ``>= min_slice``, renumbered from 0."""
        n = self.n_series
        off = min_slice * n

        def keep(e):
            return e[0] >= off and e[1] >= off

        return PDAG(
            n,
            self.window_len - min_slice,
            frozenset((u - off, v - off) for u, v in self.directed if keep((u, v))),
            frozenset((u - off, v - off) for u, v in self.undirected if keep((u, v))),
            self.names,
        )


def unroll(template, window_len=None):
    """Repeat ``template`` over ``window_len`` slices (slice ``window_len - 1`` is now)."""
    minimum = template.gamma_max + 1
    if window_len is None:
        window_len = default_window(template.gamma_max)
    if window_len < minimum:
        raise WindowTooSmallError(window_len, minimum)
    n = template.n_series
    edges = set()
    for e in template.edges:
        for k in range(e.lag, window_len):
            edges.add(((k - e.lag) * n + e.source, k * n + e.target))
    return UnrolledGraph(n, window_len, frozenset(edges), template.names)


def default_window(gamma_max):
    return 2 * (gamma_max + 1) + 1


def _check_vertex(g, v):
    return g.index(v)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def parents(g, v):
    i = _check_vertex(g, v)
    return {g.vertex(u) for u in _bits(g.parent_masks[i])}


def children(g, v):
    i = _check_vertex(g, v)
    return {g.vertex(u) for u in _bits(g.child_masks[i])}


def _closure(start, masks):
    reach = start
    frontier = start
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= masks[low.bit_length() - 1]
            frontier ^= low
        frontier = nxt & ~reach
        reach |= frontier
    return reach


def descendants(g, v):
    """Descendants of ``v``, including ``v`` itself."""
    i = _check_vertex(g, v)
    return {g.vertex(u) for u in _bits(_closure(1 << i, g.child_masks))}


def ancestors(g, v):
    i = _check_vertex(g, v)
    return {g.vertex(u) for u in _bits(_closure(1 << i, g.parent_masks))}


def non_descendants(g, v):
    i = _check_vertex(g, v)
    de = _closure(1 << i, g.child_masks)
    return {g.vertex(u) for u in range(g.n_vertices) if not (de >> u) & 1}


def d_connected_mask(g, x, zmask, anc_z=None):
    """Bitmask of vertices d-connected to vertex id ``x`` given the set ``zmask``.

    Reachability over (vertex, direction) states; a vertex reached from a
    child may continue both ways, one reached from a parent only passes on
    downward unless it is an ancestor of the conditioning set.
    """
    pa = g.parent_masks
    ch = g.child_masks
    if anc_z is None:
        anc_z = _closure(zmask, pa)
    reach = 0
    seen_up = front_up = 1 << x
    seen_down = front_down = 0
    while front_up or front_down:
        new_up = 0
        new_down = 0
        m = front_up & ~zmask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            new_up |= pa[v]
            new_down |= ch[v]
        m = front_down
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            if not zmask & low:
                new_down |= ch[v]
            if anc_z & low:
                new_up |= pa[v]
        reach |= (front_up | front_down) & ~zmask
        front_up = new_up & ~seen_up
        front_down = new_down & ~seen_down
        seen_up |= front_up
        seen_down |= front_down
    return reach & ~(1 << x)


def d_separated_ids(g, x, y, zmask):
    return not (d_connected_mask(g, x, zmask) >> y) & 1


class DSeparationOracle:
    """Memoized d-separation queries on one graph, keyed by (source, conditioning set)."""

    def __init__(self, g):
        self.g = g
        self._reach = {}
        self._anc = {}
        self._adj = [p | c for p, c in zip(g.parent_masks, g.child_masks)]

    def separated(self, x, y, zmask):
        if (self._adj[x] >> y) & 1:
            return False  # adjacent vertices are never d-separated
        reach = self._reach.get((x, zmask))
        if reach is None:
            other = self._reach.get((y, zmask))
            if other is not None:
                return not (other >> x) & 1
            anc = self._anc.get(zmask)
            if anc is None:
                anc = self._anc[zmask] = _closure(zmask, self.g.parent_masks)
            reach = d_connected_mask(self.g, x, zmask, anc)
            self._reach[(x, zmask)] = reach
        return not (reach >> y) & 1


def d_separated(g, x, y, z=()):
    """True iff ``x`` and ``y`` are d-separated by ``z`` in ``g``."""
    xi = g.index(x)
    yi = g.index(y)
    zmask = 0
    for v in z:
        zmask |= 1 << g.index(v)
    if xi == yi:
        raise GraphValidationError("x and y must be distinct")
    if (zmask >> xi) & 1 or (zmask >> yi) & 1:
        raise GraphValidationError("x and y must not be in the conditioning set")
    return d_separated_ids(g, xi, yi, zmask)


def unshielded_colliders(n_vertices, edges):
    """Triples ``(a, c, b)`` with ``a -> c <- b``, ``a < b`` and a, b non-adjacent."""
    pa = [set() for _ in range(n_vertices)]
    adj = [set() for _ in range(n_vertices)]
    for u, v in edges:
        pa[v].add(u)
        adj[u].add(v)
        adj[v].add(u)
    out = set()
    for c in range(n_vertices):
        ps = sorted(pa[c])
        for i, a in enumerate(ps):
            for b in ps[i + 1:]:
                if b not in adj[a]:
                    out.add((a, c, b))
    return frozenset(out)


def dag_to_cpdag(g, rules=_meek.ALL_RULES):
    """CPDAG of the Markov equivalence class of ``g`` (no temporal knowledge)."""
    directed = set()
    for a, c, b in unshielded_colliders(g.n_vertices, g.edges):
        directed.add((a, c))
        directed.add((b, c))
    undirected = {(min(u, v), max(u, v)) for u, v in g.edges if (u, v) not in directed}
    state = _meek.OrientationState(g.n_vertices, directed, undirected)
    _meek.apply_rules(state, rules)
    return PDAG(
        g.n_series,
        g.window_len,
        state.directed_edges(),
        state.undirected_edges(),
        g.names,
    )


def edge_status(directed, undirected, a, b):
    if (a, b) in directed:
        return Orientation.FORWARD
    if (b, a) in directed:
        return Orientation.BACKWARD
    if (min(a, b), max(a, b)) in undirected:
        return Orientation.UNDIRECTED
    return Orientation.ABSENT


def as_pdag(g):
    """View a fully directed unrolled graph as a PDAG."""
    return PDAG(g.n_series, g.window_len, g.edges, frozenset(), g.names)


def template_from_edges(n_series, edges: Iterable, names=None):
    return TemplateGraph(n_series, frozenset(TemplateEdge(*e) for e in edges), names)
