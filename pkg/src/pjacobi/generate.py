"""Test-matrix generators.

Streams come from numpy's PCG64 generator seeded through ``SeedSequence``,
so a given seed produces the same matrix on every platform.
"""

import numpy as np


def random_symmetric(n, seed=0, low=-5.0, high=5.0):
    """Upper triangle uniform in ``[low, high]``, mirrored to the lower triangle."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.uniform(low, high, size=(n, n)))
    h = upper + np.triu(upper, 1).T
    return np.asfortranarray(h)


def graded(n, seed=0, decades=14.0, kappa=10.0, shuffle=True):
    """``D A D`` with ``D`` spanning ``decades`` orders of magnitude.

    ``A`` is a random orthogonal similarity of a diagonal with magnitudes in
    ``[1, kappa]`` and random signs, so ``kappa_2(A) <= kappa``.
    """
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = rng.uniform(1.0, kappa, n) * rng.choice([-1.0, 1.0], n)
    a = (q * lam) @ q.T
    a = 0.5 * (a + a.T)
    d = 10.0 ** np.linspace(-decades / 2, decades / 2, n)
    if shuffle:
        d = rng.permutation(d)
    h = d[:, None] * a * d[None, :]
    return np.asfortranarray(0.5 * (h + h.T)), a, d


def example1():
    """The 4x4 symmetric matrix with eigenvalues -1, 1, 1, 3 whose pivot blocks go singular."""
    return np.array([[1.0, 0.0, 1.0, 1.0],
                     [0.0, 1.0, 1.0, 1.0],
                     [1.0, 1.0, 1.0, 0.0],
                     [1.0, 1.0, 0.0, 1.0]], order="F")
