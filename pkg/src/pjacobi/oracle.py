"""Reference eigensolvers used to check the parallel solver.

``cyclic_jacobi`` is a classical two-sided row-cyclic Jacobi written
independently of the rotation and inner-Jacobi code.  ``extended_eigvals``
uses mpmath at high working precision and is meant for small orders.
"""

import math

import mpmath
import numba
import numpy as np


class OracleNonConvergence(RuntimeError):
    pass


@numba.njit(cache=True)
def _cyclic_jacobi(a, v, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j] * a[i, j]
        diag = 0.0
        for i in range(n):
            diag += a[i, i] * a[i, i]
        if off <= (1e-17 ** 2) * diag or off == 0.0:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                # skip negligible entries to guarantee termination
                if abs(apq) < 1e-18 * math.sqrt(abs(app * aqq)):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                theta = (aqq - app) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                tau = s / (1.0 + c)
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = akp - s * (akq + tau * akp)
                        a[k, q] = akq + s * (akp - tau * akq)
                        a[p, k] = a[k, p]
                        a[q, k] = a[k, q]
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp - s * (vkq + tau * vkp)
                    v[k, q] = vkq + s * (vkp - tau * vkq)
    return -1


def cyclic_jacobi(h, max_sweeps=60):
    """Two-sided cyclic Jacobi: returns ``(eigenvalues, eigenvectors, sweeps)``."""
    a = np.array(h, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("oracle needs a square matrix")
    a = 0.5 * (a + a.T)
    v = np.eye(a.shape[0])
    sweeps = _cyclic_jacobi(a, v, max_sweeps)
    if sweeps < 0:
        raise OracleNonConvergence(f"two-sided Jacobi oracle did not converge in {max_sweeps} sweeps")
    return np.diag(a).copy(), v, sweeps


def extended_eigvals(h, dps=60):
    """Eigenvalues of the exact binary values of ``h``, computed with ``dps`` digits."""
    h = np.asarray(h, dtype=np.float64)
    with mpmath.workdps(dps):
        m = mpmath.matrix(h.tolist())
        ev = mpmath.eigsy(m, eigvals_only=True)
        return np.array(sorted(float(x) for x in ev))


def inertia(lam):
    lam = np.asarray(lam)
    return int(np.count_nonzero(lam > 0)), int(np.count_nonzero(lam < 0))
