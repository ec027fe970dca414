"""Command line interface: ``scgident {check,discover,enumerate,verify}``.

Exit codes: 0 success / all identifiable, 1 negative verdict or
disagreement, 2 usage or parse error, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .discovery import RULE_SETS, ftmpdag_of, tpc
from .enumeration import census, default_workers, verify_all, verify_theorem, DEFAULT_BUDGET
from .exceptions import (
    BudgetExceededError,
    GraphValidationError,
    IncompatibleSCGError,
    InconsistentOrientationError,
    ParseError,
)
from .graph import default_window, unroll
from .identifiability import all_pairs, cde_identifiable, s_identifiable, total_effect_identifiable
from .summary import READINGS, scg_of
from .textio import align_scg, format_pdag, read_scg, read_template

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3

log = logging.getLogger("scgident")


class _UsageError(Exception):
    pass


def _emit(args, human_lines, doc):
    """Human text to stdout, or JSON to stdout and the human text to stderr."""
    if args.json:
        for line in human_lines:
            print(line, file=sys.stderr)
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for line in human_lines:
            print(line)


def _series_index(scg, name):
    names = scg.series_names
    if name not in names:
        raise _UsageError(f"unknown series name {name!r}")
    return names.index(name)


def cmd_check(args):
    scg = read_scg(args.scg_file)
    names = scg.series_names
    lines = []
    if scg.n_series == 0:
        _emit(args, ["note: empty SCG over zero series"], {"pairs": []})
        return EXIT_OK
    if args.effect:
        if args.pair:
            raise _UsageError("--effect does not take a pair")
        node_name = args.treatment if args.effect == "total" else args.outcome
        if node_name is None:
            flag = "--treatment" if args.effect == "total" else "--outcome"
            raise _UsageError(f"--effect {args.effect} needs {flag}")
        node = _series_index(scg, node_name)
        decide = total_effect_identifiable if args.effect == "total" else cde_identifiable
        decision = decide(scg, node, args.reading)
        blocking = [[names[p.x], names[p.y]] for p in decision.blocking]
        if decision.guaranteed:
            lines.append(f"EFFECT {args.effect.upper()} {node_name} IDENTIFIABLE")
        else:
            lines.append(f"EFFECT {args.effect.upper()} {node_name} NOT-GUARANTEED")
            lines += [f"BLOCKING {a} {b}" for a, b in blocking]
        doc = {"effect": args.effect, "node": node_name,
               "guaranteed": decision.guaranteed, "blocking": blocking}
        _emit(args, lines, doc)
        return EXIT_OK if decision.guaranteed else EXIT_NEGATIVE

    if args.pair:
        if len(args.pair) != 2:
            raise _UsageError("a pair needs exactly two series names")
        x, y = (_series_index(scg, a) for a in args.pair)
        if x == y:
            raise _UsageError("a pair needs two distinct series")
        reports = [s_identifiable(scg, x, y, args.reading)]
        # keep the user's argument order in the printed line
        lines = [f"PAIR {args.pair[0]} {args.pair[1]} {reports[0].verdict.value} "
                 f"{reports[0].reason.value}"]
    else:
        reports = all_pairs(scg, args.reading)
        lines = [r.format(names) for r in reports]
    _emit(args, lines, {"pairs": [r.to_dict(names) for r in reports]})
    return EXIT_OK if all(r.identifiable for r in reports) else EXIT_NEGATIVE


def _instantaneous_view(p, min_slice):
    return p.restrict(min_slice)


def cmd_discover(args):
    template = read_template(args.template_file)
    names = template.series_names
    if args.scg:
        scg = align_scg(read_scg(args.scg), names)
    else:
        scg = scg_of(template)
    window = args.window if args.window is not None else default_window(template.gamma_max)

    def run(length):
        if args.method == "mec":
            return ftmpdag_of(template, scg, length, args.rules)
        return tpc(unroll(template, length), scg, args.rules, gamma_max=template.gamma_max)

    p = run(window)
    dump = format_pdag(p, names)
    if args.json:
        print(dump, end="", file=sys.stderr)
        doc = {"window_len": window, "series": list(names),
               "directed": sorted([list(e) for e in p.directed]),
               "undirected": sorted([list(e) for e in p.undirected])}
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        print(dump, end="")
    if args.stability:
        gamma = template.gamma_max
        longer = run(window + 1)
        if _instantaneous_view(p, gamma) != _instantaneous_view(longer, gamma + 1):
            print("error: orientations change when the window grows by one slice",
                  file=sys.stderr)
            return EXIT_INCONSISTENT
    return EXIT_OK


def _format_census_table(rows):
    header = ("n", "# SCGs", "# Not fully s-id", "%")
    body = [(str(r.n), f"{r.total_scgs:,}", f"{r.not_fully_sid:,}", f"{r.percent:.2f}") for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    fmt = "  ".join("{:>%d}" % w for w in widths)
    return [fmt.format(*header)] + [fmt.format(*b) for b in body]


def cmd_enumerate(args):
    workers = args.workers if args.workers is not None else default_workers()
    rows = [census(n, workers, args.reading, args.allow_large) for n in args.n]
    _emit(args, _format_census_table(rows), {"rows": [r.to_dict() for r in rows],
                                             "reading": args.reading})
    return EXIT_OK


def cmd_verify(args):
    workers = args.workers if args.workers is not None else default_workers()
    if (args.n is None) == (args.scg is None):
        raise _UsageError("give either a number of series or --scg FILE")
    if args.scg is not None:
        scg = read_scg(args.scg)
        names = scg.series_names
        rep = verify_theorem(scg, args.gamma_max, args.window, args.budget, args.reading)
        lines = []
        for pv in rep.pairs:
            r = pv.expected
            line = (f"PAIR {names[r.pair.x]} {names[r.pair.y]} {r.verdict.value} "
                    f"{pv.observed.value} {'agree' if pv.agrees else 'DISAGREE'}")
            lines.append(line)
        lines.append(f"{rep.n_templates} templates, {len(rep.disagreements)} disagreements"
                     + ("" if rep.complete else " (incomplete: budget exceeded)")
                     + (f", {len(rep.unstable)} unstable" if rep.unstable else ""))
        doc = {
            "templates": rep.n_templates,
            "complete": rep.complete,
            "window_len": rep.window_len,
            "pairs": [
                {**pv.expected.to_dict(names), "observed": pv.observed.value,
                 "agrees": pv.agrees}
                for pv in rep.pairs
            ],
            "unstable": len(rep.unstable),
        }
        _emit(args, lines, doc)
        return EXIT_OK if rep.ok else EXIT_NEGATIVE

    agg = verify_all(args.n, args.gamma_max, args.window, workers, args.budget,
                     args.reading, args.allow_large)
    lines = [f"{agg.n_scgs} SCGs, {len(agg.disagreements)} disagreements"]
    lines.append(f"{agg.n_templates} templates, {agg.not_fully_sid} SCGs not fully s-identifiable")
    if agg.unstable:
        lines.append(f"{len(agg.unstable)} window-unstable pairs")
    if agg.incomplete:
        lines.append(f"{len(agg.incomplete)} SCGs incomplete (budget exceeded)")
    _emit(args, lines, agg.to_dict())
    return EXIT_OK if agg.ok else EXIT_NEGATIVE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="scgident",
        description="Orientation identifiability of instantaneous edges from summary causal graphs.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true",
                       help="write a JSON document to stdout (human text goes to stderr)")
        p.add_argument("--reading", choices=READINGS, default="theorem",
                       help="collider reading for the pair test (default: theorem)")

    p = sub.add_parser("check", help="s-identifiability verdicts from an SCG file")
    p.add_argument("scg_file")
    p.add_argument("pair", nargs="*", metavar="SERIES")
    p.add_argument("--effect", choices=("total", "cde"))
    p.add_argument("--treatment")
    p.add_argument("--outcome")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("discover", help="oracle tPC on a template file")
    p.add_argument("template_file")
    p.add_argument("--scg", help="SCG file (default: the SCG of the template)")
    p.add_argument("--window", type=int, help="number of time slices")
    p.add_argument("--rules", choices=sorted(RULE_SETS), default="all")
    p.add_argument("--method", choices=("tpc", "mec"), default="tpc")
    p.add_argument("--stability", action="store_true",
                   help="fail if interior orientations change with one more slice")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("enumerate", help="census of all SCGs on n series")
    p.add_argument("n", type=int, nargs="+")
    p.add_argument("--workers", type=int, help="worker processes (env SCGIDENT_WORKERS)")
    p.add_argument("--allow-large", action="store_true")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="brute-force check of the pair verdicts")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--scg")
    p.add_argument("--gamma-max", type=int, default=1)
    p.add_argument("--window", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--workers", type=int)
    p.add_argument("--allow-large", action="store_true")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, GraphValidationError, IncompatibleSCGError, _UsageError,
            BudgetExceededError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconsistentOrientationError as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
