"""Per-pair s-identifiability verdicts and the effect-identifiability criteria."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .exceptions import GraphValidationError
from .summary import (
    adjacent,
    has_self_loop,
    is_bidirected,
    neighbors,
    unshielded_collider_exists,
)


class Verdict(enum.Enum):
    SID = "SId"
    NOT_SID = "NotSId"


class Reason(enum.Enum):
    NO_ADJACENCY = "NoAdjacency"
    DIRECTED_EDGE = "DirectedEdge"
    NO_DOUBLE_SELF_LOOP = "NoDoubleSelfLoop"
    UNSHIELDED_COLLIDER = "UnshieldedCollider"
    THEOREM_BLOCKED = "TheoremBlocked"


@dataclass(frozen=True)
class MacroPair:
    x: int
    y: int

    def __post_init__(self):
        if self.x == self.y:
            raise GraphValidationError("a macro pair needs two distinct series")
        if self.x > self.y:
            a, b = self.y, self.x
            object.__setattr__(self, "x", a)
            object.__setattr__(self, "y", b)


@dataclass(frozen=True)
class SIdReport:
    pair: MacroPair
    verdict: Verdict
    reason: Reason

    @property
    def identifiable(self):
        return self.verdict is Verdict.SID

    def format(self, names):
        return (
            f"PAIR {names[self.pair.x]} {names[self.pair.y]} "
            f"{self.verdict.value} {self.reason.value}"
        )

    def to_dict(self, names):
        return {
            "x": names[self.pair.x],
            "y": names[self.pair.y],
            "verdict": self.verdict.value,
            "reason": self.reason.value,
        }


def s_identifiable(scg, x, y, reading="theorem"):
    """Classify the instantaneous edge between series ``x`` and ``y``.

    Reasons are tried cheapest first; the first that applies is reported.
    """
    pair = MacroPair(x, y)
    x, y = pair.x, pair.y
    if not adjacent(scg, x, y):
        reason = Reason.NO_ADJACENCY
    elif not is_bidirected(scg, x, y):
        reason = Reason.DIRECTED_EDGE
    elif not (has_self_loop(scg, x) and has_self_loop(scg, y)):
        reason = Reason.NO_DOUBLE_SELF_LOOP
    elif unshielded_collider_exists(scg, x, y, reading):
        reason = Reason.UNSHIELDED_COLLIDER
    else:
        return SIdReport(pair, Verdict.NOT_SID, Reason.THEOREM_BLOCKED)
    return SIdReport(pair, Verdict.SID, reason)


def all_pairs(scg, reading="theorem"):
    n = scg.n_series
    return [s_identifiable(scg, x, y, reading) for x in range(n) for y in range(x + 1, n)]


def fully_identifiable(scg, reading="theorem"):
    return all(r.identifiable for r in all_pairs(scg, reading))


@dataclass(frozen=True)
class EffectDecision:
    """Outcome of a sufficient criterion; ``False`` means "not guaranteed"."""

    guaranteed: bool
    blocking: tuple

    def __bool__(self):
        return self.guaranteed


def _neighborhood_check(scg, node, reading):
    blocking = []
    for z in sorted(neighbors(scg, node)):
        report = s_identifiable(scg, z, node, reading)
        if not report.identifiable:
            blocking.append(report.pair)
    return EffectDecision(not blocking, tuple(blocking))


def total_effect_identifiable(scg, treatment, reading="theorem"):
    """Every edge at the treatment is s-identifiable, so its parents are recoverable."""
    return _neighborhood_check(scg, treatment, reading)


def cde_identifiable(scg, outcome, reading="theorem"):
    """Every edge at the outcome is s-identifiable."""
    return _neighborhood_check(scg, outcome, reading)
