"""scikit-learn style wrappers around discovery and the pair classifier.

Both estimators follow the usual contract: hyper-parameters are stored
verbatim in ``__init__``, ``fit`` validates its input and sets trailing
underscore attributes, and ``get_params``/``set_params``/``clone`` work.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .discovery import RULE_SETS, ftmpdag_of, orient_query, tpc
from .exceptions import GraphValidationError
from .graph import TemplateGraph, UnrolledGraph, default_window, unroll
from .identifiability import all_pairs, s_identifiable
from .summary import READINGS, SCG, scg_of


def check_scg(scg, n_series=None):
    if isinstance(scg, SCG):
        out = scg
    else:
        arr = np.asarray(scg, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise GraphValidationError("an SCG adjacency matrix must be square")
        out = SCG.from_matrix(arr.tolist())
    if n_series is not None and out.n_series != n_series:
        raise GraphValidationError(
            f"SCG has {out.n_series} series, expected {n_series}"
        )
    return out


def check_template(template):
    if not isinstance(template, TemplateGraph):
        raise TypeError(f"expected a TemplateGraph, got {type(template).__name__}")
    return template


def check_pairs(pairs, n_series):
    arr = np.asarray(pairs, dtype=int)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphValidationError("pairs must have shape (n_pairs, 2)")
    if arr.size and (arr.min() < 0 or arr.max() >= n_series):
        raise GraphValidationError("pair index out of range")
    if np.any(arr[:, 0] == arr[:, 1]):
        raise GraphValidationError("a pair needs two distinct series")
    return arr


class TemporalPC(BaseEstimator):
    """Oracle tPC over a window of a stationary FT-DAG.

    Parameters
    ----------
    scg : SCG or array-like, optional
        Background knowledge. Defaults to the SCG of the fitted graph.
    window_len : int, optional
        Number of time slices; defaults to ``2 * (gamma_max + 1) + 1``.
    rules : {"all", "first-only"}
        Meek rules used in the closure.
    method : {"tpc", "mec"}
        ``"tpc"`` runs the PC search against a d-separation oracle,
        ``"mec"`` builds the FT-MPDAG from the equivalence class directly.
    """

    def __init__(self, scg=None, window_len=None, rules="all", method="tpc"):
        self.scg = scg
        self.window_len = window_len
        self.rules = rules
        self.method = method

    def fit(self, X, y=None):
        """Learn the FT-MPDAG of ``X`` (a TemplateGraph or an UnrolledGraph)."""
        if self.rules not in RULE_SETS:
            raise ValueError(f"rules must be one of {sorted(RULE_SETS)}")
        if self.method not in ("tpc", "mec"):
            raise ValueError("method must be 'tpc' or 'mec'")
        if isinstance(X, UnrolledGraph):
            if self.method == "mec":
                raise ValueError("method='mec' needs the template, not an unrolled window")
            truth = X
            gamma = X.gamma_max
            scg = self._scg_for(truth.n_series, lambda: _scg_of_window(truth))
        else:
            template = check_template(X)
            gamma = template.gamma_max
            window = self.window_len if self.window_len is not None else default_window(gamma)
            scg = self._scg_for(template.n_series, lambda: scg_of(template))
            if self.method == "mec":
                truth = None
                self.mpdag_ = ftmpdag_of(template, scg, window, self.rules)
            else:
                truth = unroll(template, window)
        if truth is not None:
            self.mpdag_ = tpc(truth, scg, self.rules, gamma_max=gamma)
        self.scg_ = scg
        self.n_series_ = self.mpdag_.n_series
        self.window_len_ = self.mpdag_.window_len
        self.gamma_max_ = gamma
        return self

    def _scg_for(self, n, default):
        if self.scg is None:
            return default()
        return check_scg(self.scg, n)

    def orient(self, x, y):
        check_is_fitted(self, "mpdag_")
        return orient_query(self.mpdag_, x, y)

    def predict(self, pairs):
        """Orientation of each series pair at the most recent slice."""
        check_is_fitted(self, "mpdag_")
        arr = check_pairs(pairs, self.n_series_)
        k = self.window_len_ - 1
        return [orient_query(self.mpdag_, (int(a), k), (int(b), k)) for a, b in arr]


def _scg_of_window(g):
    n = g.n_series
    return SCG.from_edges(n, {(u % n, v % n) for u, v in g.edges})


class SIdentifiabilityClassifier(BaseEstimator):
    """Decide from an SCG alone which instantaneous edges are always oriented."""

    def __init__(self, reading="theorem"):
        self.reading = reading

    def fit(self, X, y=None):
        if self.reading not in READINGS:
            raise ValueError(f"reading must be one of {READINGS}")
        self.scg_ = check_scg(X)
        self.n_series_ = self.scg_.n_series
        self.reports_ = all_pairs(self.scg_, self.reading)
        return self

    def predict(self, pairs):
        """Boolean array, True where the pair is s-identifiable."""
        check_is_fitted(self, "scg_")
        arr = check_pairs(pairs, self.n_series_)
        return np.array(
            [s_identifiable(self.scg_, int(a), int(b), self.reading).identifiable for a, b in arr],
            dtype=bool,
        )

    def explain(self, pairs):
        check_is_fitted(self, "scg_")
        arr = check_pairs(pairs, self.n_series_)
        return [s_identifiable(self.scg_, int(a), int(b), self.reading) for a, b in arr]
