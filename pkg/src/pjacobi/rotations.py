"""2x2 trigonometric and hyperbolic Jacobi transformations.

The scalar kernels (``trig_cs``, ``hyp_cs``, ``rotate_columns``) are
numba-compiled so the inner Jacobi loops can call them directly; the public
functions wrap them in :class:`RotationParams`.

Column update conventions::

    trig:        (m_i, m_j) <- (c m_i - s m_j,  s m_i + c m_j)
    hyperbolic:  (m_i, m_j) <- (c m_i + s m_j,  s m_i + c m_j)
"""

from dataclasses import dataclass
import math

import numba
import numpy as np

IDENTITY, TRIG, HYPERBOLIC = 0, 1, 2
_KIND_NAMES = {IDENTITY: "identity", TRIG: "trig", HYPERBOLIC: "hyperbolic"}
_KIND_CODES = {v: k for k, v in _KIND_NAMES.items()}

#: tanh of the reduced angle used when rounding makes |tanh| >= 1
HYP_CLAMP = 0.9


@numba.njit(cache=True, nogil=True)
def trig_cs(a_ii, a_jj, a_ij, tol):
    """Smaller-angle rotation that zeroes ``a_ij``; returns (kind, c, s)."""
    if a_ij == 0.0 or abs(a_ij) <= tol * math.sqrt(abs(a_ii * a_jj)):
        return IDENTITY, 1.0, 0.0
    tau = (a_jj - a_ii) / (2.0 * a_ij)
    if math.isinf(tau):
        # |a_ij| underflows relative to the diagonal gap: t ~ 1/(2 tau)
        t = 0.0
    else:
        sg = 1.0 if tau >= 0.0 else -1.0
        at = abs(tau)
        if at > 1e150:
            t = sg / (2.0 * at)
        else:
            t = sg / (at + math.sqrt(1.0 + at * at))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return TRIG, c, t * c


@numba.njit(cache=True, nogil=True)
def hyp_cs(a_ii, a_jj, a_ij, tol):
    """Hyperbolic rotation diagonalizing a positive definite 2x2.

    Solves ``tanh 2phi = -2 a_ij / (a_ii + a_jj)``; returns (kind, ch, sh).
    """
    if a_ij == 0.0 or abs(a_ij) <= tol * math.sqrt(abs(a_ii * a_jj)):
        return IDENTITY, 1.0, 0.0
    th2 = -2.0 * a_ij / (a_ii + a_jj)
    if abs(th2) >= 1.0:
        t = HYP_CLAMP if th2 > 0.0 else -HYP_CLAMP
    else:
        t = th2 / (1.0 + math.sqrt((1.0 - th2) * (1.0 + th2)))
        if abs(t) >= 1.0:
            t = HYP_CLAMP if th2 > 0.0 else -HYP_CLAMP
    ch = 1.0 / math.sqrt((1.0 - t) * (1.0 + t))
    return HYPERBOLIC, ch, ch * t


@numba.njit(cache=True, nogil=True)
def rotate_columns(m, i, j, kind, c, s):
    if kind == IDENTITY:
        return
    rows = m.shape[0]
    if kind == TRIG:
        for k in range(rows):
            x = m[k, i]
            y = m[k, j]
            m[k, i] = c * x - s * y
            m[k, j] = s * x + c * y
    else:
        for k in range(rows):
            x = m[k, i]
            y = m[k, j]
            m[k, i] = c * x + s * y
            m[k, j] = s * x + c * y


@dataclass(frozen=True)
class RotationParams:
    kind: str
    c: float
    s: float
    i: int = 0
    j: int = 1

    def inverse(self):
        return RotationParams(self.kind, self.c, -self.s, self.i, self.j)

    def matrix(self):
        """The 2x2 matrix Q with ``[m_i', m_j'] = [m_i, m_j] Q``."""
        c, s = self.c, self.s
        if self.kind == "trig":
            return np.array([[c, s], [-s, c]])
        if self.kind == "hyperbolic":
            return np.array([[c, s], [s, c]])
        return np.eye(2)


def _wrap(res, i, j):
    kind, c, s = res
    return RotationParams(_KIND_NAMES[int(kind)], float(c), float(s), i, j)


def trig_params(a_ii, a_jj, a_ij, conv_tol=0.0, i=0, j=1):
    return _wrap(trig_cs(float(a_ii), float(a_jj), float(a_ij), float(conv_tol)), i, j)


def hyp_params(a_ii, a_jj, a_ij, conv_tol=0.0, i=0, j=1):
    if not (a_ii > 0 and a_jj > 0):
        raise ValueError("hyperbolic pivot needs a positive definite 2x2 block")
    return _wrap(hyp_cs(float(a_ii), float(a_jj), float(a_ij), float(conv_tol)), i, j)


def apply_to_columns(m, rot):
    """Apply ``rot`` in place to columns ``rot.i`` and ``rot.j`` of ``m``."""
    ncols = m.shape[1]
    if not (0 <= rot.i < ncols and 0 <= rot.j < ncols) or rot.i == rot.j:
        raise IndexError(f"rotation indices ({rot.i}, {rot.j}) invalid for {ncols} columns")
    if m.dtype != np.float64:
        raise TypeError("apply_to_columns works on float64 arrays")
    rotate_columns(m, rot.i, rot.j, _KIND_CODES[rot.kind], rot.c, rot.s)
