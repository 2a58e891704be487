"""Sweep counts of HF and HFSC on random matrices.

HFSC factors each pivot block with the sign-pivoted Cholesky, which keeps
columns of equal sign together; it usually needs fewer sweeps than HF.
"""

import numpy as np

from pjacobi.cli import bench_rows, sweep_comparison

rows = bench_rows(sizes=[128], variants=["HF", "HFSC"], procs=[2, 4], seeds=range(6))
for r in rows:
    print(f"{r['variant']:5s} n={r['n']} p={r['p']} seed={r['seed']} sweeps={r['sweeps']} "
          f"time={r['time_ms']:.0f} ms orth={r['orth_fro']:.1e}")
print()
for c in sweep_comparison(rows):
    print(c)
print("eigenvalue magnitude range:",
      f"{np.min([r['eig_min_abs'] for r in rows]):.2e} .. {np.max([r['eig_max_abs'] for r in rows]):.2e}")
