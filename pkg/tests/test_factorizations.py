import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pjacobi.factorizations import (
    NotPositiveDefiniteError,
    RankDeficiencyError,
    bunch_parlett_complete,
    cholesky_diag_pivoted,
    cholesky_sign_pivoted,
    cholesky_unpivoted,
    permutation_matrix,
    qr_of_trapezoid,
    restore_column_order,
)
from pjacobi.generate import random_symmetric
from pjacobi.oracle import cyclic_jacobi, inertia

EX1_R = np.array([
    [1.0, 0.0, 1.0, 1.0],
    [0.0, 1.0, 1.0, 1.0],
    [0.0, 0.0, 1.224744871391589, 1.224744871391589],
    [0.0, 0.0, -0.7071067811865475, 0.7071067811865475],
])


def test_bunch_parlett_example1_frozen(ex1):
    f = bunch_parlett_complete(ex1)
    assert np.allclose(f.R, EX1_R, atol=1e-15)
    assert f.J.tolist() == [1, 1, -1, 1]
    assert f.perm.tolist() == [0, 1, 2, 3]
    assert np.allclose(f.reconstruct(), ex1, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**31))
def test_bunch_parlett_reconstructs_and_inertia(n, seed):
    a = random_symmetric(n, seed=seed)
    f = bunch_parlett_complete(a)
    assert f.rank == n
    res = np.linalg.norm(f.reconstruct() - a)
    assert res <= 1e-13 * n * np.linalg.norm(a)
    lam, _, _ = cyclic_jacobi(a)
    assert (int(np.sum(f.J > 0)), int(np.sum(f.J < 0))) == inertia(lam)


def test_bunch_parlett_permutation_convention():
    a = random_symmetric(6, seed=11)
    f = bunch_parlett_complete(a)
    pm = permutation_matrix(f.perm)
    assert np.allclose(a[f.perm][:, f.perm], pm.T @ a @ pm)
    assert np.allclose(a[f.perm][:, f.perm], (f.R.T * f.J) @ f.R, atol=1e-12)
    assert np.allclose(restore_column_order(f), f.R @ pm.T)


def test_bunch_parlett_singular_trapezoid():
    h = np.array([[1.0, 1.0], [1.0, 1.0]])
    f = bunch_parlett_complete(h)
    assert f.rank == 1 and f.R.shape == (1, 2)
    assert np.allclose(f.reconstruct(), h)


def test_bunch_parlett_zero_diagonal_takes_2x2():
    h = np.array([[0.0, 2.0], [2.0, 0.0]])
    f = bunch_parlett_complete(h)
    assert sorted(f.J.tolist()) == [-1, 1]
    assert np.allclose(f.reconstruct(), h)


def test_bunch_parlett_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        bunch_parlett_complete(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_cholesky_frozen():
    a = np.array([[4.0, 2.0, 0.0], [2.0, 5.0, 1.0], [0.0, 1.0, 3.0]])
    r = cholesky_unpivoted(a).R
    assert np.allclose(r, [[2.0, 1.0, 0.0], [0.0, 2.0, 0.5], [0.0, 0.0, 1.6583123951777]])
    f = cholesky_diag_pivoted(a)
    assert f.perm.tolist() == [1, 0, 2]
    assert f.R[0, 0] == pytest.approx(np.sqrt(5.0))
    assert np.allclose(f.reconstruct(), a)


def test_cholesky_not_pd():
    with pytest.raises(NotPositiveDefiniteError):
        cholesky_unpivoted(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(NotPositiveDefiniteError):
        cholesky_diag_pivoted(np.array([[1.0, 0.0], [0.0, -1.0]]))


def _spd(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, n))
    return x.T @ x + n * np.eye(n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.integers(0, 2**31))
def test_diag_pivoted_nonincreasing_diagonal(n, seed):
    f = cholesky_diag_pivoted(_spd(n, seed))
    d = np.diag(f.R)
    assert np.all(d[1:] <= d[:-1] * (1 + 1e-12))


@pytest.mark.parametrize("npos", [0, 1, 3, 5, 6])
def test_sign_pivoted(npos):
    n = 6
    a = _spd(n, npos)
    j = np.array([1] * npos + [-1] * (n - npos))
    f = cholesky_sign_pivoted(a, j)
    assert np.allclose(a[f.perm][:, f.perm], f.R.T @ f.R, atol=1e-12)
    # the +/- split is preserved: positive indices stay in front
    assert set(f.perm[:npos].tolist()) == set(range(npos))


def test_sign_pivoted_needs_sorted_signs():
    with pytest.raises(ValueError):
        cholesky_sign_pivoted(np.eye(3), [1, -1, 1])


def test_qr_of_trapezoid():
    w = np.array([[1.0], [1.0]])
    q, t = qr_of_trapezoid(w)
    assert np.allclose(q.T @ q, np.eye(2), atol=1e-15)
    assert np.allclose(q[:, :1] @ t, w)
    with pytest.raises(RankDeficiencyError):
        qr_of_trapezoid(np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]]))
