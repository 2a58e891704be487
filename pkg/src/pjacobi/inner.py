"""Sequential one-sided Jacobi on a square pivot factor.

Each worker runs these on its private pivot block.  Transformations are
accumulated into a square work matrix which the caller then applies once to
the tall block columns.
"""

from dataclasses import dataclass

import numba
import numpy as np

from .matrix import as_signs
from .rotations import IDENTITY, hyp_cs, rotate_columns, trig_cs

MAX_INNER_SWEEPS = 30


class InnerNonConvergence(RuntimeError):
    def __init__(self, msg, residual):
        super().__init__(msg)
        self.residual = residual


@dataclass
class InnerResult:
    Q: np.ndarray
    rotations_used: int
    stages_used: int
    passes: int
    converged: bool


@numba.njit(cache=True, nogil=True)
def _one_sided(f, q, jsign, side, full, diagonalize, tol, max_sweeps, hyperbolic):
    n = f.shape[1]
    rows = f.shape[0]
    rotations = 0
    visited = 0
    passes = 0
    converged = False
    while passes < max_sweeps:
        passes += 1
        applied = 0
        for u in range(n - 1):
            for v in range(u + 1, n):
                if not full and side[u] == side[v]:
                    continue
                visited += 1
                auu = 0.0
                avv = 0.0
                auv = 0.0
                if hyperbolic:
                    for t in range(rows):
                        x = f[t, u]
                        y = f[t, v]
                        auu += x * x
                        avv += y * y
                        auv += x * y
                else:
                    for t in range(rows):
                        x = f[t, u]
                        y = f[t, v]
                        jt = jsign[t]
                        auu += jt * x * x
                        avv += jt * y * y
                        auv += jt * x * y
                if hyperbolic and jsign[u] != jsign[v]:
                    kind, c, s = hyp_cs(auu, avv, auv, tol)
                else:
                    kind, c, s = trig_cs(auu, avv, auv, tol)
                if kind != IDENTITY:
                    rotate_columns(f, u, v, kind, c, s)
                    rotate_columns(q, u, v, kind, c, s)
                    applied += 1
        rotations += applied
        if applied == 0:
            converged = True
            break
        if not diagonalize:
            converged = True
            break
    return rotations, visited, passes, converged


def _side_array(n, scope):
    if scope is None or (isinstance(scope, str) and scope == "full"):
        return np.zeros(n, dtype=np.int64), True
    if isinstance(scope, (int, np.integer)):
        if not 0 < scope < n:
            raise ValueError(f"block split {scope} out of range for order {n}")
        side = np.zeros(n, dtype=np.int64)
        side[scope:] = 1
        return side, False
    side = np.asarray(scope, dtype=np.int64)
    if side.shape != (n,):
        raise ValueError("scope membership array has the wrong length")
    return side, False


def relative_offdiag(f, j=None, scope=None):
    """Largest ``|a_uv| / sqrt(|a_uu a_vv|)`` over in-scope pairs of the factor's Gram."""
    if j is None:
        a = f.T @ f
    else:
        a = (f.T * j) @ f
    n = a.shape[0]
    side, full = _side_array(n, scope)
    d = np.sqrt(np.abs(np.diag(a)))
    denom = np.outer(d, d)
    mask = np.triu(np.ones((n, n), dtype=bool), 1)
    if not full:
        mask &= side[:, None] != side[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(denom > 0, np.abs(a) / denom, np.where(a != 0, np.inf, 0.0))
    return float(np.max(r[mask], initial=0.0))


def _run(r, j, scope, mode, conv_tol, max_sweeps, hyperbolic):
    f = np.array(r, dtype=np.float64, order="F")
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise ValueError("inner Jacobi needs a square factor")
    n = f.shape[1]
    j = as_signs(j, n)
    if mode not in ("one_sweep", "diagonalize"):
        raise ValueError(f"unknown inner mode {mode!r}")
    side, full = _side_array(n, scope)
    q = np.asfortranarray(np.eye(n))
    rot, visited, passes, conv = _one_sided(
        f, q, j, side, full, mode == "diagonalize", float(conv_tol), int(max_sweeps), hyperbolic
    )
    if not conv:
        res = relative_offdiag(f, None if hyperbolic else j, scope)
        raise InnerNonConvergence(
            f"inner Jacobi did not converge in {max_sweeps} sweeps "
            f"(max relative off-diagonal {res:.3e})",
            res,
        )
    return InnerResult(Q=q, rotations_used=int(rot), stages_used=int(visited),
                       passes=int(passes), converged=bool(conv)), f


def inner_sweep_trig(r, j, scope=None, mode="one_sweep", conv_tol=0.0,
                     max_sweeps=MAX_INNER_SWEEPS, return_factor=False):
    """Orthogonalize the columns of ``r`` in the ``diag(j)`` inner product.

    ``scope`` is ``None`` (all pairs), an integer split ``k`` (only pairs with
    one column below and one at or above ``k``), or a 0/1 membership array.
    The accumulated ``Q`` satisfies ``Q^T (R^T J R) Q`` diagonal in
    ``diagonalize`` mode.
    """
    res, f = _run(r, j, scope, mode, conv_tol, max_sweeps, False)
    return (res, f) if return_factor else res


def inner_sweep_hyp(r, j, scope=None, mode="one_sweep", conv_tol=0.0,
                    max_sweeps=MAX_INNER_SWEEPS, return_factor=False):
    """Orthogonalize the columns of ``r`` with ``diag(j)``-orthogonal transforms.

    Column pairs of equal sign get trigonometric rotations, mixed pairs
    hyperbolic ones.  ``Q`` satisfies ``Q^T J Q = J``.
    """
    res, f = _run(r, j, scope, mode, conv_tol, max_sweeps, True)
    return (res, f) if return_factor else res


def apply_permutation_rows(q, perm):
    """Return ``Pi @ Q``: row ``perm[k]`` of the result is row ``k`` of ``q``.

    With ``A[perm][:, perm] = R^T R`` and ``Q`` acting on ``R``, the result
    acts on the columns of the unpermuted factor.
    """
    q = np.asarray(q)
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape[0] != q.shape[0]:
        raise ValueError("permutation length does not match the row count")
    out = np.empty_like(q, order="F")
    out[perm] = q
    return out
