"""Mutable orientation state and Meek's rules R1-R4.

Works on integer vertex ids. Used by both the CPDAG construction and
the discovery closure, which wrap it with their own extra rules.
"""

from __future__ import annotations

from .exceptions import InconsistentOrientationError


class OrientationState:
    __slots__ = ("n", "und", "pa", "ch")

    def __init__(self, n_vertices, directed=(), undirected=()):
        self.n = n_vertices
        self.und = [set() for _ in range(n_vertices)]
        self.pa = [set() for _ in range(n_vertices)]
        self.ch = [set() for _ in range(n_vertices)]
        for u, v in undirected:
            self.und[u].add(v)
            self.und[v].add(u)
        for u, v in directed:
            self.ch[u].add(v)
            self.pa[v].add(u)

    def adjacent(self, a, b):
        return b in self.und[a] or b in self.pa[a] or b in self.ch[a]

    def orient(self, a, b):
        """Turn the undirected edge a - b into a -> b."""
        if b not in self.und[a]:
            if b in self.ch[a]:
                return False
            raise InconsistentOrientationError(
                f"cannot orient {a} -> {b}: edge is absent or already {b} -> {a}"
            )
        self.und[a].discard(b)
        self.und[b].discard(a)
        self.ch[a].add(b)
        self.pa[b].add(a)
        return True

    def directed_edges(self):
        return frozenset((u, v) for u in range(self.n) for v in self.ch[u])

    def undirected_edges(self):
        return frozenset((u, v) for u in range(self.n) for v in self.und[u] if u < v)

    def check_acyclic(self):
        indeg = [len(p) for p in self.pa]
        stack = [v for v in range(self.n) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for c in self.ch[v]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    stack.append(c)
        if seen != self.n:
            raise InconsistentOrientationError("orientations contain a directed cycle")


def rule1(s):
    changed = False
    for b in range(s.n):
        if not s.pa[b]:
            continue
        for c in sorted(s.und[b]):
            if any(not s.adjacent(a, c) for a in s.pa[b] if a != c):
                changed |= s.orient(b, c)
    return changed


def rule2(s):
    changed = False
    for a in range(s.n):
        for c in sorted(s.und[a]):
            if s.ch[a] & s.pa[c]:
                changed |= s.orient(a, c)
    return changed


def rule3(s):
    # a - c, a - d, c -> b <- d, c and d non-adjacent, a - b  =>  a -> b
    changed = False
    for a in range(s.n):
        for b in sorted(s.und[a]):
            cands = sorted(s.und[a] & s.pa[b])
            if any(
                not s.adjacent(c, d)
                for i, c in enumerate(cands)
                for d in cands[i + 1:]
            ):
                changed |= s.orient(a, b)
    return changed


def rule4(s):
    # a - b, c -> d -> b, c and b non-adjacent, a adjacent to both c and d  =>  a -> b
    changed = False
    for a in range(s.n):
        for b in sorted(s.und[a]):
            hit = False
            for d in s.pa[b]:
                if not s.adjacent(a, d):
                    continue
                for c in s.pa[d]:
                    if c != a and c != b and s.adjacent(a, c) and not s.adjacent(c, b):
                        hit = True
                        break
                if hit:
                    break
            if hit:
                changed |= s.orient(a, b)
    return changed


ALL_RULES = (rule1, rule2, rule3, rule4)
FIRST_ONLY = (rule1,)


def apply_rules(state, rules=ALL_RULES):
    """Apply ``rules`` until nothing changes. Returns True if anything was oriented."""
    any_change = False
    changed = True
    while changed:
        changed = False
        for rule in rules:
            changed |= rule(state)
        any_change |= changed
    return any_change
