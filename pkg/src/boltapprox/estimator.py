"""scikit-learn style front end.

``SumApproximator`` regresses a target on two categorical label columns with
the model ``y ~ g[s] + h[p]`` under the uniform (sup-norm) loss.
``RidgeLabeler`` turns point coordinates into those two label columns, so the
two compose in a :class:`~sklearn.pipeline.Pipeline`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import InputError
from .solver import solve_ds, solve_lp
from .space import FiniteQuotientSpace, SumElement, build_ridge
from .validation import check_label_matrix, check_target, lookup_labels

__all__ = ["SumApproximator", "RidgeLabeler"]


class SumApproximator(RegressorMixin, BaseEstimator):
    """Best sup-norm fit of ``y`` by a function of ``s`` plus a function of ``p``.

    Parameters
    ----------
    method : {"lp", "ds"}
        Exact linear programming, or alternating midrange sweeps (needs every
        (s, p) combination to occur exactly once).
    tol : float
        Stopping tolerance of the sweeps.
    max_sweeps : int
        Sweep budget.

    Attributes
    ----------
    s_labels_, p_labels_ : ndarray
        Distinct labels seen in ``fit``, in the order used by ``g_`` and ``h_``.
    g_, h_ : ndarray
        Fitted values per s-label and per p-label, with ``h_[0] == 0``.
    error_ : float
        Sup-norm training residual, the best achievable.
    dual_value_ : float
        Maximum bolt functional of ``y``; equals ``error_``.
    dual_bolt_ : Bolt or None
        Closed bolt attaining ``dual_value_`` (sample indices).
    """

    def __init__(self, method="lp", tol=1e-9, max_sweeps=10_000):
        self.method = method
        self.tol = tol
        self.max_sweeps = max_sweeps

    def fit(self, X, y):
        X = check_label_matrix(X)
        y = check_target(y, X.shape[0])
        if self.method not in ("lp", "ds"):
            raise InputError(f"unknown method {self.method!r}")
        self.s_labels_, s = np.unique(X[:, 0], return_inverse=True)
        self.p_labels_, p = np.unique(X[:, 1], return_inverse=True)
        self.space_ = FiniteQuotientSpace(s.ravel(), p.ravel())
        if self.method == "lp":
            sol = solve_lp(self.space_, y)
        else:
            sol = solve_ds(self.space_, y, self.tol, self.max_sweeps)
        self.solution_ = sol
        self.g_ = sol.witness.g
        self.h_ = sol.witness.h
        self.error_ = sol.error
        self.dual_value_ = sol.dual_value
        self.dual_bolt_ = sol.dual_witness
        self.n_iter_ = sol.n_iter
        self.n_features_in_ = 2
        return self

    @property
    def witness_(self) -> SumElement:
        check_is_fitted(self, "g_")
        return SumElement(self.g_, self.h_)

    def predict(self, X):
        check_is_fitted(self, "g_")
        X = check_label_matrix(X)
        s = lookup_labels(X[:, 0], self.s_labels_, "s")
        p = lookup_labels(X[:, 1], self.p_labels_, "p")
        return self.g_[s] + self.h_[p]

    def score(self, X, y, sample_weight=None):
        """Negative sup-norm residual on ``(X, y)``; larger is better."""
        y = check_target(y, np.asarray(X).shape[0])
        return -float(np.max(np.abs(y - self.predict(X))))


def _intervals(values, labels):
    k = labels.max() + 1
    lo = np.full(k, np.inf)
    hi = np.full(k, -np.inf)
    np.minimum.at(lo, labels, values)
    np.maximum.at(hi, labels, values)
    return lo, hi


class RidgeLabeler(TransformerMixin, BaseEstimator):
    """Label points by chained groups of ``a.x`` and ``b.x``.

    ``fit`` groups sorted projections whose gaps are at most ``eps_class``.
    ``transform`` assigns a point to the group whose projection range, widened
    by ``eps_class``, contains it, and rejects points outside every group.
    """

    def __init__(self, a=(1.0, 0.0), b=(0.0, 1.0), eps_class=1e-9):
        self.a = a
        self.b = b
        self.eps_class = eps_class

    def fit(self, X, y=None):
        X = check_array(X, dtype=np.float64)
        space = build_ridge(X, self.a, self.b, self.eps_class)
        self.n_features_in_ = X.shape[1]
        self.s_bounds_ = _intervals(X @ np.asarray(self.a, float), space.s_class)
        self.p_bounds_ = _intervals(X @ np.asarray(self.b, float), space.p_class)
        return self

    def _assign(self, values, bounds, name):
        lo, hi = bounds
        idx = np.searchsorted(lo - self.eps_class, values, side="right") - 1
        ok = (idx >= 0) & (values <= hi[np.clip(idx, 0, None)] + self.eps_class)
        if not np.all(ok):
            raise InputError(f"{np.count_nonzero(~ok)} points fall outside every {name}-class")
        return idx

    def transform(self, X):
        check_is_fitted(self, "s_bounds_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise InputError(f"expected {self.n_features_in_} coordinates, got {X.shape[1]}")
        s = self._assign(X @ np.asarray(self.a, float), self.s_bounds_, "s")
        p = self._assign(X @ np.asarray(self.b, float), self.p_bounds_, "p")
        return np.column_stack([s, p])
