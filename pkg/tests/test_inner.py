import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pjacobi.factorizations import bunch_parlett_complete, cholesky_unpivoted
from pjacobi.generate import random_symmetric
from pjacobi.inner import (
    InnerNonConvergence,
    apply_permutation_rows,
    inner_sweep_hyp,
    inner_sweep_trig,
    relative_offdiag,
)


def _indef_factor(n, seed):
    f = bunch_parlett_complete(random_symmetric(n, seed=seed))
    return f.R, f.J


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31))
def test_trig_diagonalize(n, seed):
    r, j = _indef_factor(n, seed)
    res, f = inner_sweep_trig(r, j, mode="diagonalize", conv_tol=1e-15, return_factor=True)
    assert res.converged
    assert np.allclose(res.Q.T @ res.Q, np.eye(n), atol=1e-13)
    assert np.allclose(f, r @ res.Q, atol=1e-12)
    assert relative_offdiag(f, j) <= 1e-13


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31))
def test_hyp_diagonalize_is_j_orthogonal(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, n))
    r = cholesky_unpivoted(x.T @ x + np.eye(n)).R
    j = np.sort(rng.choice([-1, 1], n))[::-1].copy()
    res, f = inner_sweep_hyp(r, j, mode="diagonalize", conv_tol=1e-15, return_factor=True)
    jm = np.diag(j.astype(float))
    assert np.allclose(res.Q.T @ jm @ res.Q, jm, atol=1e-10)
    assert relative_offdiag(f) <= 1e-13


def test_one_sweep_visits_each_pair_once():
    r, j = _indef_factor(6, 1)
    res = inner_sweep_trig(r, j)
    assert res.passes == 1 and res.stages_used == 15


def test_split_scope_only_cross_pairs():
    r, j = _indef_factor(6, 2)
    res = inner_sweep_trig(r, j, scope=2)
    assert res.stages_used == 2 * 4
    side = np.array([0, 1, 0, 1, 0, 1])
    assert inner_sweep_trig(r, j, scope=side).stages_used == 9


def test_already_diagonal_applies_nothing():
    res = inner_sweep_trig(np.diag([3.0, 2.0, 1.0]), [1, 1, -1], mode="diagonalize")
    assert res.rotations_used == 0 and np.array_equal(res.Q, np.eye(3))


def test_nonconvergence_reports_residual():
    r, j = _indef_factor(10, 5)
    with pytest.raises(InnerNonConvergence) as err:
        inner_sweep_trig(r, j, mode="diagonalize", conv_tol=1e-300, max_sweeps=1)
    assert err.value.residual > 0


def test_bad_inputs():
    with pytest.raises(ValueError):
        inner_sweep_trig(np.ones((2, 3)), [1, 1, 1])
    with pytest.raises(ValueError):
        inner_sweep_trig(np.eye(3), [1, 1, 1], mode="bogus")
    with pytest.raises(ValueError):
        inner_sweep_trig(np.eye(3), [1, 1, 1], scope=3)


def test_apply_permutation_rows():
    q = np.arange(9.0).reshape(3, 3)
    out = apply_permutation_rows(q, [2, 0, 1])
    assert np.array_equal(out[2], q[0]) and np.array_equal(out[0], q[1])
