"""Best uniform approximation of a sampled function by ``g o s + h o p``."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bolt import Bolt
from .boltgraph import DualResult, build_graph, max_mean_cycle
from .exceptions import InputError, NonConvergence, NotProductSpace
from .simplex import solve_standard_form
from .space import FiniteQuotientSpace, SumElement, check_function, evaluate_sum, is_product_space

__all__ = ["Method", "ApproxSolution", "solve_lp", "solve_ds", "chebyshev_lp"]

logger = logging.getLogger(__name__)


class Method(enum.Enum):
    LP = "lp"
    DS = "ds"


@dataclass(frozen=True)
class ApproxSolution:
    """Best approximation error, a minimiser ``witness`` and the cycle dual.

    ``witness`` is anchored so that ``h[0] == 0``; ``dual_witness`` is the
    closed bolt found by the maximum mean cycle search (``None`` when the
    space has no closed bolt).
    """

    error: float
    witness: SumElement
    dual_value: float
    method: Method
    dual_witness: Optional[Bolt] = None
    n_iter: int = 0

    def to_dict(self) -> dict:
        return {
            "error": self.error,
            "dual_value": self.dual_value,
            "method": self.method.value,
            "n_iter": self.n_iter,
            "witness": {
                **self.witness.to_dict(),
                "bolt": None if self.dual_witness is None else self.dual_witness.to_dict(),
            },
        }


def _dual(space, f) -> DualResult:
    return max_mean_cycle(build_graph(space, f))


def chebyshev_lp(space: FiniteQuotientSpace, f):
    """Standard-form data of the measure LP dual to ``min_u ||f - u||``.

    Variables are nonnegative weights ``lam_i`` and ``mu_i`` on the points,
    with total mass one, zero net mass on each s-class and on every p-class
    except class 0 (its multiplier is the anchored ``h[0] = 0``). Minimising
    ``sum f (mu - lam)`` gives ``-E(f)``.
    """
    n, n_s, n_p = space.n, space.n_s, space.n_p
    A = np.zeros((1 + n_s + n_p - 1, 2 * n))
    A[0] = 1.0
    idx = np.arange(n)
    A[1 + space.s_class, idx] = 1.0
    A[1 + space.s_class, n + idx] = -1.0
    keep = space.p_class > 0
    rows = n_s + space.p_class[keep]
    A[rows, idx[keep]] = 1.0
    A[rows, n + idx[keep]] = -1.0
    b = np.zeros(A.shape[0])
    b[0] = 1.0
    c = np.r_[-f, f]
    return c, A, b


def solve_lp(space: FiniteQuotientSpace, f) -> ApproxSolution:
    """Exact best approximation by linear programming.

    The primal variables ``(t, g, h)`` of ``min t`` subject to
    ``|f_i - g[s_i] - h[p_i]| <= t`` are read off the simplex multipliers of
    the dual measure problem.
    """
    f = check_function(space, f)
    c, A, b = chebyshev_lp(space, f)
    res = solve_standard_form(c, A, b)
    y = -res.y
    g = y[1:1 + space.n_s]
    h = np.r_[0.0, y[1 + space.n_s:]]
    witness = SumElement(g, h)
    error = float(np.max(np.abs(f - evaluate_sum(space, witness))))
    if abs(error + res.fun) > 1e-7 * (1.0 + abs(error)):
        logger.warning("LP objective %r and witness residual %r disagree", -res.fun, error)
    dual = _dual(space, f)
    return ApproxSolution(error, witness, dual.value, Method.LP, dual.witness, res.n_pivots)


def _midrange_by_class(r, labels, k):
    hi = np.full(k, -np.inf)
    lo = np.full(k, np.inf)
    np.maximum.at(hi, labels, r)
    np.minimum.at(lo, labels, r)
    return 0.5 * (hi + lo)


def solve_ds(space: FiniteQuotientSpace, f, tol: float = 1e-9, max_sweeps: int = 10_000) -> ApproxSolution:
    """Diliberto-Straus alternating midrange sweeps on a product space.

    Each sweep removes the midrange of the residual from every s-class and
    then from every p-class. Iteration stops once a sweep lowers the sup norm
    by less than ``tol`` or after ``max_sweeps`` sweeps. Raises
    :class:`NonConvergence` (carrying the partial solution) when the final
    error is more than ``100 * tol`` away from the cycle dual.
    """
    if not is_product_space(space):
        raise NotProductSpace("the alternating sweep needs a product (grid) space")
    if not tol > 0:
        raise InputError("tol must be positive")
    if max_sweeps < 1:
        raise InputError("max_sweeps must be positive")
    f = check_function(space, f)
    r = f.copy()
    g = np.zeros(space.n_s)
    h = np.zeros(space.n_p)
    norm = float(np.max(np.abs(r)))
    sweeps = 0
    while sweeps < max_sweeps:
        a = _midrange_by_class(r, space.s_class, space.n_s)
        g += a
        r -= a[space.s_class]
        b = _midrange_by_class(r, space.p_class, space.n_p)
        h += b
        r -= b[space.p_class]
        sweeps += 1
        new_norm = float(np.max(np.abs(r)))
        done = norm - new_norm < tol
        norm = new_norm
        if done:
            break
    witness = SumElement(g, h).anchored()
    error = float(np.max(np.abs(f - evaluate_sum(space, witness))))
    dual = _dual(space, f)
    sol = ApproxSolution(error, witness, dual.value, Method.DS, dual.witness, sweeps)
    if abs(error - dual.value) > 100 * tol:
        raise NonConvergence(
            f"alternating sweeps stopped at {error!r} after {sweeps} sweeps, "
            f"dual value is {dual.value!r}",
            sol,
        )
    return sol
