import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boltapprox.bolt import bolt_functional, dvp_bound
from boltapprox.boltgraph import enumerate_closed_bolts, has_closed_bolt
from boltapprox.exceptions import InputError, NonConvergence, NotProductSpace
from boltapprox.solver import Method, solve_ds, solve_lp
from boltapprox.space import SumElement, build_explicit, build_grid, evaluate_sum

from conftest import random_space, scipy_error


def _residual_norm(space, f, sol):
    return float(np.max(np.abs(f - evaluate_sum(space, sol.witness))))


def test_lp_square(square, square_f):
    sol = solve_lp(square, square_f)
    assert sol.method is Method.LP
    assert sol.error == pytest.approx(0.25, abs=1e-12)
    assert sol.dual_value == pytest.approx(0.25, abs=1e-12)
    assert _residual_norm(square, square_f, sol) <= 0.25 + 1e-12
    assert sol.witness.h[0] == 0.0


def test_lp_member_of_sum(square):
    sp = build_grid(3, 4)
    f = sp.s_class + sp.p_class.astype(float)
    assert solve_lp(sp, f).error == pytest.approx(0.0, abs=1e-12)


def test_lp_separated_pair():
    sp = build_explicit([0, 1], [0, 1])
    sol = solve_lp(sp, [5.0, -2.0])
    assert sol.error == pytest.approx(0.0, abs=1e-12)
    assert sol.dual_value == 0.0 and sol.dual_witness is None


def test_lp_doubled_pair(doubled_pair):
    sol = solve_lp(doubled_pair, [1.0, -1.0, 0.0])
    assert sol.error == pytest.approx(1.0, abs=1e-12)
    assert sol.dual_value == 1.0


def test_lp_single_point():
    sol = solve_lp(build_explicit([0], [0]), [3.5])
    assert sol.error == pytest.approx(0.0, abs=1e-12)


def test_lp_shape_mismatch(square):
    with pytest.raises(InputError):
        solve_lp(square, [1.0, 2.0])


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_lp_against_highs_and_dual(seed):
    rng = np.random.default_rng(seed)
    sp = random_space(rng, n_max=25)
    f = rng.uniform(-1, 1, sp.n)
    sol = solve_lp(sp, f)
    assert sol.error == pytest.approx(scipy_error(sp, f), abs=1e-8)
    assert abs(sol.error - sol.dual_value) <= 1e-7
    assert _residual_norm(sp, f, sol) == pytest.approx(sol.error, abs=1e-9)
    assert sol.witness.h[0] == 0.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_weak_duality_all_enumerated_bolts(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 8))
    sp = build_explicit(rng.integers(0, 3, n), rng.integers(0, 3, n))
    f = rng.uniform(-1, 1, n)
    error = solve_lp(sp, f).error
    for b in enumerate_closed_bolts(sp, 6):
        assert bolt_functional(b, f) <= error + 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.floats(-5, 5))
def test_lp_gauge(seed, c):
    rng = np.random.default_rng(seed)
    sp = random_space(rng, n_max=15)
    f = rng.uniform(-1, 1, sp.n)
    sol = solve_lp(sp, f)
    shifted = SumElement(sol.witness.g + c, sol.witness.h - c)
    np.testing.assert_allclose(
        evaluate_sum(sp, shifted), evaluate_sum(sp, sol.witness), atol=1e-12
    )
    assert solve_lp(sp, f + c).error == pytest.approx(sol.error, abs=1e-9)


def test_lp_dvp_consistency(square, square_f):
    sol = solve_lp(square, square_f)
    assert dvp_bound(square, square_f, sol.witness, sol.dual_witness) == pytest.approx(0.25, abs=1e-12)


def test_no_bolt_means_zero_error(rng):
    for _ in range(20):
        n = int(rng.integers(2, 20))
        sp = build_explicit(np.arange(n), rng.integers(0, 3, n))
        assert not has_closed_bolt(sp)
        assert solve_lp(sp, rng.uniform(-1, 1, n)).error <= 1e-9


def test_ds_square_hand_iteration(square, square_f):
    sol = solve_ds(square, square_f, tol=1e-12)
    assert sol.method is Method.DS
    assert sol.error == pytest.approx(0.25, abs=1e-15)
    r = square_f - evaluate_sum(square, sol.witness)
    np.testing.assert_allclose(r, [0.25, -0.25, -0.25, 0.25], atol=1e-15)
    assert sol.witness.h[0] == 0.0
    # first sweep lands on the optimum, the second confirms no progress
    assert sol.n_iter == 2


def test_ds_constant():
    sp = build_grid(3, 3)
    sol = solve_ds(sp, np.full(9, 4.2), tol=1e-12)
    assert sol.error == 0.0


def test_ds_product_corner():
    sp = build_grid(20, 20)
    f = sp.coords[:, 0] * sp.coords[:, 1]
    sol = solve_ds(sp, f, tol=1e-9, max_sweeps=10_000)
    assert sol.error == pytest.approx(1.0, abs=1e-6)


def test_ds_rejects_non_product(doubled_pair):
    with pytest.raises(NotProductSpace):
        solve_ds(doubled_pair, [1.0, 0.0, 0.0])


def test_ds_rejects_bad_tol(square, square_f):
    with pytest.raises(InputError):
        solve_ds(square, square_f, tol=0.0)


def test_ds_nonconvergence_reported():
    sp = build_grid(4, 4)
    f = np.random.default_rng(0).uniform(-1, 1, sp.n)
    with pytest.raises(NonConvergence) as info:
        solve_ds(sp, f, tol=1e-12, max_sweeps=1)
    sol = info.value.solution
    assert sol.n_iter == 1
    assert sol.error > sol.dual_value + 0.1


def _ds_norm_history(space, f, sweeps):
    r = f.copy()
    norms = [np.max(np.abs(r))]
    for _ in range(sweeps):
        for labels, k in ((space.s_class, space.n_s), (space.p_class, space.n_p)):
            hi = np.array([r[labels == a].max() for a in range(k)])
            lo = np.array([r[labels == a].min() for a in range(k)])
            r = r - 0.5 * (hi + lo)[labels]
        norms.append(np.max(np.abs(r)))
    return np.array(norms)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_ds_monotone_and_agrees_with_lp(seed):
    rng = np.random.default_rng(seed)
    nx, ny = (int(v) for v in rng.integers(2, 8, 2))
    sp = build_grid(nx, ny)
    f = rng.uniform(-1, 1, sp.n)
    norms = _ds_norm_history(sp, f, 30)
    assert np.all(np.diff(norms) <= 1e-15)
    ds = solve_ds(sp, f, tol=1e-9, max_sweeps=10_000)
    lp = solve_lp(sp, f)
    assert abs(ds.error - lp.error) <= 1e-4
    assert float(np.max(np.abs(f - evaluate_sum(sp, ds.witness)))) == pytest.approx(ds.error, abs=1e-12)
