"""Orientation identifiability of instantaneous edges from summary causal graphs."""

from .discovery import ftmpdag_of, meek_closure, orient_query, present_orientation, tpc
from .enumeration import census, verify_all, verify_theorem
from .estimators import SIdentifiabilityClassifier, TemporalPC
from .exceptions import (
    BudgetExceededError,
    GraphValidationError,
    IncompatibleSCGError,
    InconsistentOrientationError,
    ParseError,
    ScgIdentError,
    WindowTooSmallError,
)
from .graph import (
    PDAG,
    Orientation,
    TemplateEdge,
    TemplateGraph,
    UnrolledGraph,
    Vertex,
    d_separated,
    dag_to_cpdag,
    unroll,
)
from .identifiability import (
    Reason,
    SIdReport,
    Verdict,
    all_pairs,
    cde_identifiable,
    fully_identifiable,
    s_identifiable,
    total_effect_identifiable,
)
from .summary import SCG, compatible, enumerate_compatible_templates, scg_of
from .textio import parse_scg, parse_template, read_scg, read_template

__version__ = "0.1.0"
