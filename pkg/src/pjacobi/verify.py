"""Check a computed eigendecomposition against the reference solvers."""

from dataclasses import dataclass

import numpy as np

from .engine import TRIG_ALGORITHMS
from .oracle import cyclic_jacobi, extended_eigvals
from .solver import relative_accuracy_report, theorem1_bound

DENSE_ORACLE_MAX_N = 512
EXTENDED_ORACLE_MAX_N = 12

EIG_RTOL = 1e-10
RESIDUAL_RTOL = 1e-11
HYP_ORTH_TOL = 1e-12


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    gating: bool = True

    @property
    def margin(self):
        return self.value / self.threshold if self.threshold > 0 else float("inf")

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        if not self.gating:
            flag = "INFO-" + flag
        return f"{flag} {self.name}: {self.value:.3e} (limit {self.threshold:.3e}, margin {self.margin:.3g})"


def verify(h, eigenvalues, eigenvectors=None, *, variant=None, p=1, stages=0,
           extended=None, naive=False):
    """Run all applicable checks; returns a list of :class:`Check`.

    When the extended-precision oracle runs it decides the eigenvalue check;
    the two-sided oracle is then reported but not gating, since it is only
    accurate relative to ``||H||`` and graded inputs defeat it.
    """
    h = np.asarray(h, dtype=np.float64)
    n = h.shape[0]
    lam = np.asarray(eigenvalues, dtype=np.float64)
    checks = []
    if extended is None:
        extended = n <= EXTENDED_ORACLE_MAX_N
    if n <= DENSE_ORACLE_MAX_N:
        ref, _, _ = cyclic_jacobi(h)
        err, _ = relative_accuracy_report(lam, ref)
        checks.append(Check("eigenvalues_vs_two_sided_jacobi", err, EIG_RTOL, err <= EIG_RTOL,
                            gating=not extended))
    if extended:
        ex = extended_eigvals(h)
        err, _ = relative_accuracy_report(lam, ex)
        checks.append(Check("eigenvalues_vs_extended_precision", err, EIG_RTOL, err <= EIG_RTOL))
        if naive:
            # demonstration only: a backward-stable dense solver loses relative accuracy
            nerr, _ = relative_accuracy_report(np.linalg.eigvalsh(h), ex)
            checks.append(Check("naive_eigvalsh_vs_extended_precision", nerr, EIG_RTOL,
                                nerr <= EIG_RTOL, gating=False))
    if eigenvectors is not None:
        u = np.asarray(eigenvectors, dtype=np.float64)
        res = np.linalg.norm(h @ u - u * lam) / np.linalg.norm(h)
        checks.append(Check("residual_rel", res, RESIDUAL_RTOL, res <= RESIDUAL_RTOL))
        gram = u.T @ u - np.eye(n)
        if variant is not None and variant.upper() in TRIG_ALGORITHMS:
            bound = theorem1_bound(stages, p, n)
            o2 = float(np.linalg.norm(gram, 2))
            checks.append(Check("orthogonality_theorem1", o2, bound, o2 <= bound))
        else:
            of = float(np.linalg.norm(gram))
            checks.append(Check("orthogonality_fro", of, HYP_ORTH_TOL, of <= HYP_ORTH_TOL))
    return checks


def all_passed(checks):
    return all(c.passed for c in checks if c.gating)
