"""Square-factor producers for the pivot blocks and the outer preprocessing.

Permutations are index vectors ``perm`` with the convention
``A[perm][:, perm] = R^T J R``: column ``k`` of ``R`` belongs to original
column ``perm[k]``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .matrix import EPS, as_matrix, as_signs, inverse_permutation

#: Bunch-Parlett growth-balancing threshold
BP_ALPHA = (1.0 + np.sqrt(17.0)) / 8.0


class NotPositiveDefiniteError(np.linalg.LinAlgError):
    pass


class RankDeficiencyError(np.linalg.LinAlgError):
    pass


@dataclass
class IndefFactor:
    R: np.ndarray
    J: np.ndarray
    perm: np.ndarray
    rank: int

    @property
    def n(self):
        return self.R.shape[1]

    def reconstruct(self):
        """Return ``P^T R^T J R P`` in the original column order."""
        f = restore_column_order(self)
        return (f.T * self.J) @ f


@dataclass
class CholFactor:
    R: np.ndarray
    perm: np.ndarray

    def reconstruct(self):
        f = np.empty_like(self.R)
        f[:, self.perm] = self.R
        return f.T @ f


def _check_symmetric(a):
    if not np.array_equal(a, a.T):
        scale = np.max(np.abs(a)) if a.size else 0.0
        if np.max(np.abs(a - a.T)) > 64 * EPS * scale:
            raise ValueError("matrix is not symmetric")


def _swap_sym(w, i, j):
    if i != j:
        w[[i, j], :] = w[[j, i], :]
        w[:, [i, j]] = w[:, [j, i]]


def bunch_parlett_complete(a, rank_tol=None):
    """Symmetric indefinite factorization with complete pivoting.

    Returns an :class:`IndefFactor` with ``A[perm][:, perm] = R^T diag(J) R``.
    Each 2x2 pivot is replaced by its eigendecomposition so ``J`` is a plain
    signature; ``R`` is then block upper triangular with dense 2x2 diagonal
    blocks.  Elimination stops once the trailing Schur complement drops to
    ``n * eps`` times the largest original entry in the same rows and
    columns (graded matrices keep their tiny trailing pivots), leaving a
    trapezoidal ``rank x n`` factor.
    """
    a = as_matrix(a, square=True, name="A")
    _check_symmetric(a)
    n = a.shape[0]
    w = np.array(0.5 * (a + a.T), order="C")
    perm = np.arange(n)
    R = np.zeros((n, n))
    J = np.zeros(n, dtype=np.int64)
    orig = np.abs(w)

    k = 0
    while k < n:
        sub = w[k:, k:]
        d = np.abs(np.diag(sub))
        i0 = int(np.argmax(d))
        mu0 = d[i0]
        m = n - k
        if m > 1:
            off = np.abs(np.triu(sub, 1))
            flat = int(np.argmax(off))
            r1, c1 = divmod(flat, m)
            mu1 = off[r1, c1]
        else:
            mu1 = 0.0
        if rank_tol is None:
            rest = perm[k:]
            tol = n * EPS * np.max(orig[np.ix_(rest, rest)])
        else:
            tol = rank_tol
        if max(mu0, mu1) <= tol:
            break
        if mu0 >= BP_ALPHA * mu1:
            q = k + i0
            _swap_sym(w, k, q)
            perm[[k, q]] = perm[[q, k]]
            R[:k, [k, q]] = R[:k, [q, k]]
            piv = w[k, k]
            sq = np.sqrt(abs(piv))
            sgn = 1 if piv > 0 else -1
            R[k, k] = sq
            R[k, k + 1:] = w[k, k + 1:] / (sgn * sq)
            J[k] = sgn
            row = w[k, k + 1:].copy()
            w[k + 1:, k + 1:] -= np.outer(row, row) / piv
            k += 1
        else:
            # r1 < c1, so the first swap never moves the column at k + c1
            for dst, src in ((k, k + r1), (k + 1, k + c1)):
                _swap_sym(w, dst, src)
                perm[[dst, src]] = perm[[src, dst]]
                R[:k, [dst, src]] = R[:k, [src, dst]]
            e = w[k:k + 2, k:k + 2].copy()
            mu, v = np.linalg.eigh(e)
            absmu = np.abs(mu)
            sgn = np.where(mu > 0, 1, -1)
            R[k:k + 2, k:k + 2] = np.sqrt(absmu)[:, None] * v.T
            c = w[k:k + 2, k + 2:].copy()
            R[k:k + 2, k + 2:] = (sgn / np.sqrt(absmu))[:, None] * (v.T @ c)
            J[k:k + 2] = sgn
            einv = (v / mu) @ v.T
            w[k + 2:, k + 2:] -= c.T @ einv @ c
            k += 2
        w[k:, k:] = 0.5 * (w[k:, k:] + w[k:, k:].T)

    rank = k
    return IndefFactor(R=np.asfortranarray(R[:rank]), J=J[:rank].copy(), perm=perm, rank=rank)


def restore_column_order(f):
    """Form ``F = R P``: column ``k`` of the result is original column ``k``."""
    out = np.empty_like(f.R, order="F")
    out[:, f.perm] = f.R
    return out


def cholesky_unpivoted(a):
    a = as_matrix(a, square=True, name="A")
    n = a.shape[0]
    w = np.array(a, order="C")
    R = np.zeros((n, n))
    for k in range(n):
        piv = w[k, k]
        if not piv > 0.0:
            raise NotPositiveDefiniteError(f"non-positive pivot {piv:.3e} at step {k}")
        r = np.sqrt(piv)
        R[k, k] = r
        R[k, k + 1:] = w[k, k + 1:] / r
        w[k + 1:, k + 1:] -= np.outer(R[k, k + 1:], R[k, k + 1:])
    return CholFactor(R=np.asfortranarray(R), perm=np.arange(n))


def cholesky_diag_pivoted(a):
    """Cholesky with the largest remaining diagonal as pivot (lowest index on ties)."""
    a = as_matrix(a, square=True, name="A")
    n = a.shape[0]
    w = np.array(a, order="C")
    perm = np.arange(n)
    R = np.zeros((n, n))
    for k in range(n):
        q = k + int(np.argmax(np.diag(w)[k:]))
        _swap_sym(w, k, q)
        perm[[k, q]] = perm[[q, k]]
        R[:k, [k, q]] = R[:k, [q, k]]
        piv = w[k, k]
        if not piv > 0.0:
            raise NotPositiveDefiniteError(f"non-positive pivot {piv:.3e} at step {k}")
        r = np.sqrt(piv)
        R[k, k] = r
        R[k, k + 1:] = w[k, k + 1:] / r
        w[k + 1:, k + 1:] -= np.outer(R[k, k + 1:], R[k, k + 1:])
    return CholFactor(R=np.asfortranarray(R), perm=perm)


def cholesky_sign_pivoted(a, j):
    """Two-part pivoted Cholesky respecting a sorted signature (+ first, then -).

    The positive part is factored with diagonal pivoting; the Schur
    complement of the negative part likewise, and its columns (with the
    matching part of the permutation) are then reversed.  The returned
    ``R`` satisfies ``A[perm][:, perm] = R^T R`` but is not triangular in
    its negative block.
    """
    a = as_matrix(a, square=True, name="A_P")
    n = a.shape[0]
    j = as_signs(j, n)
    npos = int(np.count_nonzero(j > 0))
    if np.any(j[:npos] < 0) or np.any(j[npos:] > 0):
        raise ValueError("signature must be sorted as (+1 ... +1, -1 ... -1)")

    if npos == n:
        return cholesky_diag_pivoted(a)
    if npos == 0:
        f = cholesky_diag_pivoted(a)
        return CholFactor(R=np.asfortranarray(f.R[:, ::-1]), perm=f.perm[::-1].copy())

    a11 = a[:npos, :npos]
    a12 = a[:npos, npos:]
    a22 = a[npos:, npos:]
    f1 = cholesky_diag_pivoted(a11)
    r11, p1 = f1.R, f1.perm
    r12 = solve_triangular(r11, a12[p1, :], trans="T", lower=False)
    s = a22 - r12.T @ r12
    s = 0.5 * (s + s.T)
    f2 = cholesky_diag_pivoted(s)
    r22, p2 = f2.R, f2.perm
    r12 = r12[:, p2]
    # reverse the second block column and its permutation
    rev = slice(None, None, -1)
    R = np.zeros((n, n))
    R[:npos, :npos] = r11
    R[:npos, npos:] = r12[:, rev]
    R[npos:, npos:] = r22[:, rev]
    perm = np.concatenate((p1, npos + p2[rev]))
    return CholFactor(R=np.asfortranarray(R), perm=perm)


def qr_of_trapezoid(w, rank_tol=None):
    """Full QR of a tall full-column-rank ``w`` (``rows x r``).

    Returns ``(Q, T)`` with ``Q`` orthogonal ``rows x rows`` and ``T`` the
    ``r x r`` upper triangular factor, so ``w = Q[:, :r] @ T``.
    """
    w = as_matrix(w, name="trapezoid")
    rows, r = w.shape
    if r > rows:
        raise ValueError("qr_of_trapezoid needs rows >= columns")
    q, t = np.linalg.qr(w, mode="complete")
    t = t[:r, :r]
    d = np.abs(np.diag(t))
    tol = rows * EPS * np.max(d, initial=0.0) if rank_tol is None else rank_tol
    if r and (np.min(d) <= tol or np.max(d) == 0.0):
        raise RankDeficiencyError("trapezoidal factor is numerically rank deficient")
    return np.asfortranarray(q), np.asfortranarray(t)


def permutation_matrix(perm):
    """Matrix ``Pi`` with ``A[perm][:, perm] = Pi^T A Pi``."""
    n = len(perm)
    pm = np.zeros((n, n))
    pm[perm, np.arange(n)] = 1.0
    return pm


__all__ = [
    "BP_ALPHA",
    "CholFactor",
    "IndefFactor",
    "NotPositiveDefiniteError",
    "RankDeficiencyError",
    "bunch_parlett_complete",
    "cholesky_diag_pivoted",
    "cholesky_sign_pivoted",
    "cholesky_unpivoted",
    "inverse_permutation",
    "permutation_matrix",
    "qr_of_trapezoid",
    "restore_column_order",
]
