"""Line-oriented text formats for templates, SCGs and PDAG dumps.

Template lines look like ``X[-2] -> Y`` (X at t-2 causes Y at t) or
``X -> Y`` (instantaneous). SCG lines look like ``A -> B``, ``A <-> B`` or
``A -> A``. A line holding a single name declares a series without edges.
``#`` starts a comment in both formats.
"""

from __future__ import annotations

import re
from pathlib import Path

from .exceptions import GraphValidationError, ParseError
from .graph import TemplateEdge, TemplateGraph
from .summary import SCG

_NAME = r"[A-Za-z0-9_]+"
_TEMPLATE_LINE = re.compile(
    rf"^(?P<src>{_NAME})(?:\[-(?P<lag>\d+)\])?\s*->\s*(?P<dst>{_NAME})$"
)
_SCG_LINE = re.compile(rf"^(?P<src>{_NAME})\s*(?P<arrow><->|->)\s*(?P<dst>{_NAME})$")
_BARE = re.compile(rf"^{_NAME}$")


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


class _Names:
    def __init__(self, fixed=None):
        self.order = list(fixed) if fixed else []
        self.index = {name: i for i, name in enumerate(self.order)}
        self.fixed = fixed is not None

    def get(self, name, lineno, source):
        if name not in self.index:
            if self.fixed:
                raise ParseError(f"unknown series name {name!r}", lineno, source)
            self.index[name] = len(self.order)
            self.order.append(name)
        return self.index[name]


def parse_template(text, source=None, names=None):
    reg = _Names(names)
    edges = []
    for lineno, line in _lines(text):
        if _BARE.match(line):
            reg.get(line, lineno, source)
            continue
        m = _TEMPLATE_LINE.match(line)
        if not m:
            raise ParseError(f"cannot parse template edge {line!r}", lineno, source)
        src = reg.get(m["src"], lineno, source)
        dst = reg.get(m["dst"], lineno, source)
        lag = int(m["lag"]) if m["lag"] is not None else 0
        edges.append((lineno, TemplateEdge(src, lag, dst)))
    for lineno, e in edges:
        if e.lag == 0 and e.source == e.target:
            raise ParseError("instantaneous self-edge is not allowed", lineno, source)
    try:
        return TemplateGraph(len(reg.order), frozenset(e for _, e in edges), tuple(reg.order))
    except GraphValidationError as exc:
        raise ParseError(str(exc), None, source) from exc


def parse_scg(text, source=None, names=None):
    reg = _Names(names)
    pairs = []
    for lineno, line in _lines(text):
        if _BARE.match(line):
            reg.get(line, lineno, source)
            continue
        m = _SCG_LINE.match(line)
        if not m:
            raise ParseError(f"cannot parse SCG edge {line!r}", lineno, source)
        a = reg.get(m["src"], lineno, source)
        b = reg.get(m["dst"], lineno, source)
        pairs.append((a, b))
        if m["arrow"] == "<->":
            pairs.append((b, a))
    return SCG.from_edges(len(reg.order), pairs, tuple(reg.order))


def read_template(path, names=None):
    path = Path(path)
    return parse_template(path.read_text(encoding="utf-8"), str(path), names)


def read_scg(path, names=None):
    path = Path(path)
    return parse_scg(path.read_text(encoding="utf-8"), str(path), names)


def format_template(template):
    names = template.series_names
    lines = []
    for e in template.sorted_edges():
        src = names[e.source] if e.lag == 0 else f"{names[e.source]}[-{e.lag}]"
        lines.append(f"{src} -> {names[e.target]}")
    return "\n".join(lines) + ("\n" if lines else "")


def format_scg(scg):
    names = scg.series_names
    lines = []
    for u, v in scg.edges():
        lines.append(f"{names[u]} -> {names[v]}")
    return "\n".join(lines) + ("\n" if lines else "")


def align_scg(scg, names):
    """Re-index ``scg`` so its series follow ``names`` (e.g. a template's order)."""
    own = scg.series_names
    if sorted(own) != sorted(names):
        missing = sorted(set(names) ^ set(own))
        raise GraphValidationError(f"series names differ between files: {', '.join(missing)}")
    pos = {name: i for i, name in enumerate(names)}
    return SCG.from_edges(
        len(names), [(pos[own[u]], pos[own[v]]) for u, v in scg.edges()], tuple(names)
    )


def vertex_label(names, n, i):
    return f"{names[i % n]}[{i // n}]"


def format_pdag(p, names=None):
    """Dump directed edges as ``A[k] -> B[k']`` and undirected as ``A[k] -- B[k]``."""
    n = p.n_series
    if names is None:
        names = p.names if p.names is not None else [f"S{i}" for i in range(n)]
    rows = [(min(u, v), max(u, v), f"{vertex_label(names, n, u)} -> {vertex_label(names, n, v)}")
            for u, v in p.directed]
    rows += [(u, v, f"{vertex_label(names, n, u)} -- {vertex_label(names, n, v)}")
             for u, v in p.undirected]
    rows.sort()
    return "".join(r[2] + "\n" for r in rows)
