"""The square-factor producers used before and inside the Jacobi sweeps."""

import numpy as np

from pjacobi import (
    bunch_parlett_complete,
    cholesky_diag_pivoted,
    cholesky_sign_pivoted,
    cholesky_unpivoted,
    random_symmetric,
)
from pjacobi.oracle import cyclic_jacobi, inertia

np.set_printoptions(precision=4, suppress=True)

h = random_symmetric(6, seed=2)
f = bunch_parlett_complete(h)
lam, _, _ = cyclic_jacobi(h)
print("indefinite H: J =", f.J, "perm =", f.perm)
print("  inertia from J:", (int(np.sum(f.J > 0)), int(np.sum(f.J < 0))), " from eigenvalues:", inertia(lam))
print("  ||P^T R^T J R P - H||_F =", np.linalg.norm(f.reconstruct() - h))

x = np.random.default_rng(0).standard_normal((6, 6))
a = x.T @ x + np.eye(6)
for name, fac in (("unpivoted", cholesky_unpivoted(a)), ("diagonal pivoting", cholesky_diag_pivoted(a))):
    print(f"\nCholesky, {name}: perm = {fac.perm}, diag(R) = {np.diag(fac.R)}")

j = np.array([1, 1, 1, -1, -1, -1])
s = cholesky_sign_pivoted(a, j)
print("\nsign-pivoted Cholesky with J =", j)
print("  perm =", s.perm, " (positive indices stay first, negative block reversed)")
print("  ||R^T R - A[perm][:, perm]||_F =", np.linalg.norm(s.R.T @ s.R - a[s.perm][:, s.perm]))
print("  R =\n", s.R)
