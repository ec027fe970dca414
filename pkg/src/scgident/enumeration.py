"""Exhaustive SCG census and brute-force verification of the pair verdicts.

The census never builds graph objects: each SCG is an n*n-bit integer and
the blocked-pair test is evaluated with vectorized bit operations over
contiguous ranges of masks.
"""

from __future__ import annotations

import enum
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .discovery import ftmpdag_of, present_orientation
from .exceptions import BudgetExceededError
from .graph import Orientation, TemplateGraph, default_window
from .identifiability import SIdReport, Verdict, all_pairs
from .summary import READINGS, SCG, count_candidate_templates, enumerate_compatible_templates

logger = logging.getLogger(__name__)

MAX_CENSUS_N = 5
MAX_WORD_N = 8
CHUNK = 1 << 20
DEFAULT_BUDGET = 10**6
WORKERS_ENV = "SCGIDENT_WORKERS"


def default_workers():
    value = os.environ.get(WORKERS_ENV)
    if value:
        return max(1, int(value))
    return 1


@dataclass(frozen=True)
class CensusRow:
    n: int
    total_scgs: int
    not_fully_sid: int

    @property
    def percent(self):
        return 100.0 * self.not_fully_sid / self.total_scgs

    def to_dict(self):
        return {
            "n": self.n,
            "total_scgs": self.total_scgs,
            "not_fully_sid": self.not_fully_sid,
            "percent": round(self.percent, 2),
        }


def mask_not_fully_sid(mask, n, reading="theorem"):
    """Scalar version of the census test for a single packed SCG."""

    def bit(u, v):
        return (mask >> (u * n + v)) & 1

    for x in range(n):
        for y in range(x + 1, n):
            if not (bit(x, y) and bit(y, x) and bit(x, x) and bit(y, y)):
                continue
            rescued = False
            for z in range(n):
                if z == x or z == y:
                    continue
                a, b = bit(z, x), bit(z, y)
                if (a != b) if reading == "theorem" else (a or b):
                    rescued = True
                    break
            if not rescued:
                return True
    return False


def _count_range(args):
    n, start, stop, reading = args
    dtype = np.uint64
    one = dtype(1)
    total = 0
    for lo in range(start, stop, CHUNK):
        masks = np.arange(lo, min(stop, lo + CHUNK), dtype=dtype)
        bits = [[((masks >> dtype(u * n + v)) & one).astype(bool) for v in range(n)] for u in range(n)]
        bad = np.zeros(masks.shape, dtype=bool)
        for x in range(n):
            for y in range(x + 1, n):
                blocked = bits[x][y] & bits[y][x] & bits[x][x] & bits[y][y]
                if not blocked.any():
                    continue
                rescued = np.zeros(masks.shape, dtype=bool)
                for z in range(n):
                    if z == x or z == y:
                        continue
                    if reading == "theorem":
                        rescued |= bits[z][x] ^ bits[z][y]
                    else:
                        rescued |= bits[z][x] | bits[z][y]
                bad |= blocked & ~rescued
        total += int(np.count_nonzero(bad))
    return total


def _split(total, parts):
    step, extra = divmod(total, parts)
    bounds = []
    lo = 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        if hi > lo:
            bounds.append((lo, hi))
        lo = hi
    return bounds


def census(n, workers=1, reading="theorem", allow_large=False):
    """Count the SCGs on ``n`` labeled series with at least one non-s-identifiable pair."""
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_WORD_N:
        raise ValueError(f"n > {MAX_WORD_N} does not fit in a machine word")
    if n > MAX_CENSUS_N and not allow_large:
        raise BudgetExceededError(
            f"census for n={n} enumerates 2^{n * n} graphs; pass allow_large to proceed"
        )
    total = 1 << (n * n)
    workers = max(1, int(workers))
    ranges = _split(total, workers)
    jobs = [(n, lo, hi, reading) for lo, hi in ranges]
    if workers == 1 or len(jobs) == 1:
        counts = [_count_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_count_range, jobs))
    return CensusRow(n, total, sum(counts))


class Outcome(enum.Enum):
    ORIENTED_IN_ALL = "OrientedInAll"
    UNORIENTED_IN_SOME = "UnorientedInSome"


@dataclass(frozen=True)
class PairVerification:
    expected: SIdReport
    observed: Outcome
    witness: TemplateGraph | None

    @property
    def agrees(self):
        return (self.expected.verdict is Verdict.SID) == (self.observed is Outcome.ORIENTED_IN_ALL)


@dataclass
class VerificationReport:
    scg: SCG
    gamma_max: int
    window_len: int
    pairs: list = field(default_factory=list)
    n_templates: int = 0
    complete: bool = True
    unstable: list = field(default_factory=list)

    @property
    def disagreements(self):
        return [p for p in self.pairs if not p.agrees]

    @property
    def ok(self):
        return self.complete and not self.disagreements and not self.unstable


def verify_theorem(scg, gamma_max=1, window_len=None, budget=DEFAULT_BUDGET, reading="theorem",
                   stability=True):
    """Compare every pair verdict with the orientations over all compatible templates.

    The instantaneous edge is queried at the last slice of a ``window_len``
    window; with ``stability`` the query is repeated on a window one slice
    longer and any difference is recorded in ``unstable``.
    """
    if window_len is None:
        window_len = default_window(gamma_max)
    report = VerificationReport(scg, gamma_max, window_len)
    expected = all_pairs(scg, reading)
    undirected_in = {}
    n_candidates = count_candidate_templates(scg, gamma_max)
    if n_candidates > budget:
        logger.warning(
            "SCG %s has %d candidate templates, over the budget of %d; report is partial",
            bin(scg.mask), n_candidates, budget,
        )
    for count, template in enumerate(enumerate_compatible_templates(scg, gamma_max)):
        if count >= budget:
            report.complete = False
            break
        report.n_templates += 1
        p = ftmpdag_of(template, scg, window_len)
        q = ftmpdag_of(template, scg, window_len + 1) if stability else None
        for r in expected:
            x, y = r.pair.x, r.pair.y
            o = present_orientation(p, x, y)
            if q is not None and present_orientation(q, x, y) != o:
                report.unstable.append((r.pair, template))
            if o is Orientation.UNDIRECTED and (x, y) not in undirected_in:
                undirected_in[(x, y)] = template
    for r in expected:
        witness = undirected_in.get((r.pair.x, r.pair.y))
        observed = Outcome.ORIENTED_IN_ALL if witness is None else Outcome.UNORIENTED_IN_SOME
        report.pairs.append(PairVerification(r, observed, witness))
    return report


@dataclass
class AggregateReport:
    n: int
    gamma_max: int
    window_len: int
    n_scgs: int = 0
    n_templates: int = 0
    not_fully_sid: int = 0
    disagreements: list = field(default_factory=list)
    unstable: list = field(default_factory=list)
    incomplete: list = field(default_factory=list)

    @property
    def ok(self):
        return not (self.disagreements or self.unstable or self.incomplete)

    def merge(self, other):
        self.n_scgs += other.n_scgs
        self.n_templates += other.n_templates
        self.not_fully_sid += other.not_fully_sid
        self.disagreements += other.disagreements
        self.unstable += other.unstable
        self.incomplete += other.incomplete

    def to_dict(self):
        return {
            "n": self.n,
            "gamma_max": self.gamma_max,
            "window_len": self.window_len,
            "scgs": self.n_scgs,
            "templates": self.n_templates,
            "not_fully_sid": self.not_fully_sid,
            "disagreements": [{"mask": m, "pair": [x, y]} for m, x, y in self.disagreements],
            "unstable": [{"mask": m, "pair": [x, y]} for m, x, y in self.unstable],
            "incomplete": list(self.incomplete),
        }


def _verify_range(args):
    n, lo, hi, gamma_max, window_len, budget, reading = args
    agg = AggregateReport(n, gamma_max, window_len)
    for mask in range(lo, hi):
        rep = verify_theorem(SCG(n, mask), gamma_max, window_len, budget, reading)
        agg.n_scgs += 1
        agg.n_templates += rep.n_templates
        if any(p.expected.verdict is Verdict.NOT_SID for p in rep.pairs):
            agg.not_fully_sid += 1
        agg.disagreements += [(mask, p.expected.pair.x, p.expected.pair.y) for p in rep.disagreements]
        agg.unstable += sorted({(mask, pr.x, pr.y) for pr, _ in rep.unstable})
        if not rep.complete:
            agg.incomplete.append(mask)
    return agg


def verify_all(n, gamma_max=1, window_len=None, workers=1, budget=DEFAULT_BUDGET,
               reading="theorem", allow_large=False):
    """Run :func:`verify_theorem` on every SCG with ``n`` series."""
    if n > 3 and not allow_large:
        raise BudgetExceededError(
            f"verifying all {1 << (n * n)} SCGs on {n} series is not a desk-scale run; "
            "pass allow_large to proceed"
        )
    if window_len is None:
        window_len = default_window(gamma_max)
    total = 1 << (n * n)
    workers = max(1, int(workers))
    jobs = [(n, lo, hi, gamma_max, window_len, budget, reading) for lo, hi in _split(total, workers)]
    if workers == 1 or len(jobs) == 1:
        parts = [_verify_range(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_verify_range, jobs))
    agg = AggregateReport(n, gamma_max, window_len)
    for part in parts:
        agg.merge(part)
    return agg
