"""Uniform approximation by sums of two quotient algebras on finite spaces."""

from .bolt import Bolt, Link, bolt_functional, dvp_bound, has_unit_norm, validate_bolt
from .boltgraph import (
    BoltGraph,
    DualResult,
    build_graph,
    enumerate_closed_bolts,
    find_extremal_bolt,
    has_closed_bolt,
    max_mean_cycle,
)
from .estimator import RidgeLabeler, SumApproximator
from .exceptions import (
    BoltApproxError,
    BrokenChain,
    ConsecutiveDuplicate,
    GuardExceeded,
    InputError,
    NonConvergence,
    NotClosable,
    NotClosed,
    NotProductSpace,
    SignViolation,
    SolverError,
    ZeroResidual,
)
from .solver import ApproxSolution, Method, solve_ds, solve_lp
from .space import (
    FiniteQuotientSpace,
    SumElement,
    build_explicit,
    build_grid,
    build_ridge,
    check_function,
    evaluate_sum,
    is_product_space,
)

__version__ = "0.1.0"
