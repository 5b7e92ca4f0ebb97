"""Dense-tableau two-phase primal simplex with Bland's pivoting rule.

Solves ``min c.x  s.t.  A x = b, x >= 0`` and also returns the simplex
multipliers ``y`` (an optimal solution of ``max b.y  s.t.  A^T y <= c``).
Redundant equality rows are detected after phase one and dropped; their
multipliers are reported as zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SolverError

__all__ = ["LPResult", "solve_standard_form"]

MAX_ITER = 10**6


@dataclass(frozen=True)
class LPResult:
    x: np.ndarray
    fun: float
    y: np.ndarray
    n_pivots: int


class _Tableau:
    def __init__(self, A, b, tol):
        m, n = A.shape
        self.m, self.n, self.tol = m, n, tol
        # columns: n structural, m artificial, rhs
        self.T = np.zeros((m + 1, n + m + 1))
        self.T[1:, :n] = A
        self.T[1:, n:n + m] = np.eye(m)
        self.T[1:, -1] = b
        self.basis = list(range(n, n + m))
        self.rows = list(range(m))  # original row index of each tableau row
        self.pivots = 0

    def pivot(self, r, j):
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r - 1] = j
        self.pivots += 1
        if self.pivots > MAX_ITER:
            raise SolverError(f"simplex exceeded {MAX_ITER} pivots")

    def set_objective(self, cost):
        """Install reduced costs for ``cost`` (length n + m) given the basis."""
        T = self.T
        T[0, :-1] = cost
        T[0, -1] = 0.0
        for r, j in enumerate(self.basis, start=1):
            if cost[j] != 0.0:
                T[0] -= cost[j] * T[r]

    def run(self, enterable):
        T, tol = self.T, self.tol
        while True:
            # Bland: lowest-index improving column, lowest-index basic variable on ties
            reduced = T[0, :-1]
            candidates = np.flatnonzero(enterable & (reduced < -tol))
            if candidates.size == 0:
                return
            j = int(candidates[0])
            col = T[1:, j]
            pos = np.flatnonzero(col > tol)
            if pos.size == 0:
                raise SolverError("linear program is unbounded")
            ratios = T[1:, -1][pos] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + tol * max(1.0, abs(best))]
            r = min(ties, key=lambda i: self.basis[i]) + 1
            self.pivot(r, j)

    def drop_row(self, r):
        self.T = np.delete(self.T, r, axis=0)
        del self.basis[r - 1]
        del self.rows[r - 1]


def solve_standard_form(c, A, b, tol: float = 1e-11) -> LPResult:
    """Minimise ``c.x`` over ``A x = b``, ``x >= 0``.

    Raises :class:`SolverError` if the problem is infeasible or unbounded.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    c = np.array(c, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1
    b[flip] *= -1
    sign = np.where(flip, -1.0, 1.0)

    tab = _Tableau(A, b, tol)
    structural = np.r_[np.ones(n, dtype=bool), np.zeros(m, dtype=bool)]

    tab.set_objective(np.r_[np.zeros(n), np.ones(m)])
    tab.run(np.ones(n + m, dtype=bool))
    scale = max(1.0, float(np.abs(b).max(initial=0.0)))
    if -tab.T[0, -1] > 1e3 * tol * scale:
        raise SolverError("linear program is infeasible")

    # drive zero-level artificials out of the basis; rows where that fails are redundant
    r = 1
    while r <= len(tab.basis):
        if tab.basis[r - 1] >= n:
            row = tab.T[r, :n]
            nz = np.flatnonzero(np.abs(row) > tol)
            if nz.size:
                tab.pivot(r, int(nz[0]))
            else:
                tab.drop_row(r)
                continue
        r += 1

    tab.set_objective(np.r_[c, np.zeros(m)])
    tab.run(structural)

    x = np.zeros(n)
    for row, j in enumerate(tab.basis, start=1):
        if j < n:
            x[j] = tab.T[row, -1]
    # artificial columns hold B^-1 for the surviving rows
    binv = tab.T[1:, n + np.array(tab.rows, dtype=int)] if tab.rows else np.zeros((0, 0))
    c_b = c[np.array(tab.basis, dtype=int)] if tab.basis else np.zeros(0)
    y = np.zeros(m)
    if tab.rows:
        y[np.array(tab.rows)] = c_b @ binv
    y *= sign
    return LPResult(x, float(c @ x), y, tab.pivots)
