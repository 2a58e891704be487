"""The 4x4 matrix whose pivot blocks are singular.

H has eigenvalues -1, 1, 1, 3.  Its Bunch-Parlett factor needs no row
exchanges, yet with two workers every 2x2 pivot Gram matrix is
[[1, 1], [1, 1]].  The trigonometric variants handle this by taking a QR
factorization of the trapezoidal factor of the pivot block.
"""

import numpy as np

from pjacobi import ALGORITHMS, bunch_parlett_complete, example1, solve_symmetric
from pjacobi.engine import EngineConfig, trig_pivot_transform
from pjacobi.solver import preprocess

np.set_printoptions(precision=6, suppress=True)

h = example1()
print("H =\n", h)

f = bunch_parlett_complete(h)
print("\nBunch-Parlett factor R =\n", f.R)
print("signature J =", f.J, " permutation =", f.perm)

pre = preprocess(h)
x = pre.G[:, [0, 3]]
print("\npivot Gram of blocks (1, 4):\n", (x.T * pre.J) @ x)
u_p, rot, _, singular = trig_pivot_transform(x, pre.J, 1, EngineConfig(p=2, algorithm="TB"), 1e-15)
print("singular:", singular, " U_P =\n", u_p)
print("||U_P^T U_P - I||_max =", np.abs(u_p.T @ u_p - np.eye(2)).max())

print("\neigenvalues per variant (p = 2):")
for v in ALGORITHMS:
    rep = solve_symmetric(h, v, 2)
    print(f"  {v:5s} {np.sort(rep.eigenvalues)}  sweeps={rep.sweeps}  "
          f"residual={rep.metrics.residual_rel:.1e}")
