"""Dense matrix helpers, signatures and the block-column partition.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Arrays that
are transformed column-wise (the factor ``G°``, eigenvector slabs) are kept
in Fortran order so a block column is one contiguous slab.
"""

from dataclasses import dataclass

import numpy as np

EPS = float(np.finfo(np.float64).eps)


class ConfigurationError(ValueError):
    """Invalid sizes or worker counts."""


def as_matrix(a, *, square=False, name="matrix"):
    """Validate and return ``a`` as a finite 2-D float64 array (Fortran order)."""
    m = np.asfortranarray(np.asarray(a, dtype=np.float64))
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or Inf")
    return m


def as_signs(j, n=None):
    """Validate a signature vector: every entry exactly -1 or +1."""
    s = np.asarray(j)
    if s.ndim != 1:
        raise ValueError("sign vector must be 1-D")
    if not np.all((s == 1) | (s == -1)):
        raise ValueError("sign vector entries must be -1 or +1")
    if n is not None and s.shape[0] != n:
        raise ValueError(f"sign vector has length {s.shape[0]}, expected {n}")
    return s.astype(np.int64)


def n_pos(j):
    return int(np.count_nonzero(np.asarray(j) > 0))


def is_permutation(perm):
    perm = np.asarray(perm)
    return perm.ndim == 1 and np.array_equal(np.sort(perm), np.arange(perm.shape[0]))


def inverse_permutation(perm):
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.shape[0])
    return inv


@dataclass(frozen=True)
class BlockPartition:
    """Split of ``n`` columns into ``2p`` block columns of near-equal width.

    Block indices are 1-based to match the pivot strategy; ``offsets[b-1]``
    is the first global column of block ``b``.
    """

    n: int
    p: int
    widths: tuple
    offsets: tuple

    @property
    def nblocks(self):
        return 2 * self.p

    def columns(self, b):
        """Global column range (0-based slice) of block ``b`` (1-based)."""
        start = self.offsets[b - 1]
        return slice(start, start + self.widths[b - 1])


def make_partition(n, p):
    """Partition ``n`` columns into ``2p`` blocks, wider blocks first."""
    if p < 1 or n < 2 * p:
        raise ConfigurationError(f"need n >= 2p >= 2, got n={n}, p={p}")
    nb = 2 * p
    q, r = divmod(n, nb)
    widths = tuple(q + 1 if b < r else q for b in range(nb))
    offsets = tuple(int(x) for x in np.concatenate(([0], np.cumsum(widths)[:-1])))
    return BlockPartition(n=n, p=p, widths=widths, offsets=offsets)


def symmetrize(a):
    """Average ``a`` with its transpose; the result is bitwise symmetric."""
    return 0.5 * (a + a.T)


def gram_with_signs(x, j=None):
    """Return ``X diag(J) X^T``, exactly symmetric.

    ``J`` weights the contracted (column) dimension of ``X``; ``None`` means
    all +1.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("X must be 2-D")
    if j is None:
        g = x @ x.T
    else:
        j = as_signs(j)
        if j.shape[0] != x.shape[1]:
            raise ValueError(
                f"sign vector length {j.shape[0]} does not match {x.shape[1]} columns"
            )
        g = (x * j) @ x.T
    return symmetrize(g)


def offdiag_frobenius(a):
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("offdiag_frobenius needs a square matrix")
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def is_symmetric(a, rtol=0.0):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    if rtol == 0.0:
        return bool(np.array_equal(a, a.T))
    scale = np.max(np.abs(a)) if a.size else 0.0
    return bool(np.max(np.abs(a - a.T), initial=0.0) <= rtol * scale)
