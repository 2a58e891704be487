"""End-to-end eigensolver facade, accuracy metrics and error-bound checks."""

from dataclasses import dataclass, field

import numpy as np

from . import engine
from .engine import EngineConfig, TRIG_ALGORITHMS, normalize_algorithm
from .factorizations import RankDeficiencyError, bunch_parlett_complete
from .matrix import EPS, as_matrix


@dataclass
class MetricsBlock:
    orth_fro: float
    orth_fro_rev: float
    orth_2: float
    residual_rel: float
    theorem1_bound: float
    theorem1_pass: bool
    sort_violations: int
    kappa2_A: float | None = None

    def as_dict(self):
        return {
            "orth_fro": self.orth_fro,
            "orth_fro_rev": self.orth_fro_rev,
            "residual_rel": self.residual_rel,
            "theorem1_bound": self.theorem1_bound,
            "theorem1_pass": self.theorem1_pass,
        }


@dataclass
class SolveReport:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int
    stages: int
    rotations: int
    variant: str
    n: int
    p: int
    metrics: MetricsBlock | None = None
    trace: list = field(default_factory=list)

    def sorted_by_magnitude(self):
        """Copy with eigenpairs ordered by decreasing ``|lambda|``."""
        order = np.argsort(-np.abs(self.eigenvalues), kind="stable")
        return SolveReport(
            self.eigenvalues[order], self.eigenvectors[:, order], self.sweeps, self.stages,
            self.rotations, self.variant, self.n, self.p, self.metrics, self.trace,
        )


def theorem1_bound(stages, p, n, eps=EPS):
    """Cap on ``||U~^T U~ - I||_2`` after ``stages`` stages of trig rotations.

    With ``b = 14 eps l sqrt(2pn)`` bounding ``||U~ - U||_2``, the departure
    from orthonormality is at most ``b (b + 2)``.
    """
    b = 14.0 * eps * stages * np.sqrt(2.0 * p * n)
    return float(b * (b + 2.0))


def sort_violations(lam):
    """Number of adjacent pairs out of decreasing-``|lambda|`` order."""
    a = np.abs(np.asarray(lam))
    return int(np.count_nonzero(a[1:] > a[:-1]))


def compute_metrics(h, lam, u, stages, p, variant):
    n = u.shape[0]
    eye = np.eye(n)
    utu = u.T @ u - eye
    uut = u @ u.T - eye
    res = h @ u - u * lam
    hn = np.linalg.norm(h)
    bound = theorem1_bound(stages, p, n)
    orth2 = float(np.linalg.norm(utu, 2))
    trig = normalize_algorithm(variant) in TRIG_ALGORITHMS
    return MetricsBlock(
        orth_fro=float(np.linalg.norm(utu)),
        orth_fro_rev=float(np.linalg.norm(uut)),
        orth_2=orth2,
        residual_rel=float(np.linalg.norm(res) / hn) if hn > 0 else float(np.linalg.norm(res)),
        theorem1_bound=bound,
        theorem1_pass=bool(orth2 <= bound) if trig else True,
        sort_violations=sort_violations(lam),
    )


@dataclass
class Preprocessed:
    """Square factor of ``H[perm][:, perm]`` with its signature sorted (+ first)."""

    G: np.ndarray
    J: np.ndarray
    perm: np.ndarray


def preprocess(h):
    """Bunch-Parlett factor of ``H`` arranged for the engine.

    Returns ``G°`` with ``H[perm][:, perm] = G°^T diag(J) G°`` and ``J`` sorted.
    The trigonometric engine takes ``G°``; the hyperbolic one takes its
    transpose.
    """
    fac = bunch_parlett_complete(h)
    n = h.shape[0]
    if fac.rank < n:
        raise RankDeficiencyError(f"H is numerically singular (rank {fac.rank} < {n})")
    sigma = np.argsort(-fac.J, kind="stable")
    return Preprocessed(G=np.asfortranarray(fac.R[sigma]), J=fac.J[sigma].copy(), perm=fac.perm)


def solve_preprocessed(pre, variant="HFSC", p=2, conv_tol=None, max_sweeps=50,
                       keep_trace=False):
    cfg = EngineConfig(p=p, algorithm=variant, conv_tol=conv_tol, max_sweeps=max_sweeps,
                       keep_trace=keep_trace)
    g = pre.G if cfg.trigonometric else np.asfortranarray(pre.G.T)
    res = engine.run(g, pre.J, cfg)
    u = np.empty_like(res.eigenvectors, order="F")
    u[pre.perm] = res.eigenvectors
    n = g.shape[0]
    return SolveReport(
        eigenvalues=res.eigenvalues, eigenvectors=u, sweeps=res.sweeps, stages=res.stages,
        rotations=res.rotations, variant=cfg.algorithm, n=n, p=p, trace=res.trace,
    )


def solve_symmetric(h, variant="HFSC", p=2, conv_tol=None, max_sweeps=50, metrics=True,
                    keep_trace=False):
    """Eigenvalues and eigenvectors of a nonsingular symmetric ``H``.

    Runs the indefinite factorization, the chosen parallel Jacobi variant on
    ``p`` workers, and maps eigenvectors back to the original ordering.
    """
    h = as_matrix(h, square=True, name="H")
    pre = preprocess(h)
    rep = solve_preprocessed(pre, variant, p, conv_tol, max_sweeps, keep_trace)
    if metrics:
        rep.metrics = compute_metrics(h, rep.eigenvalues, rep.eigenvectors, rep.stages, p,
                                      rep.variant)
    return rep


def scaled_condition(h, p=1, variant="HF"):
    """``kappa_2(D^-1 H D^-1)`` with ``D = diag(sqrt(h_kk))``, for positive definite ``H``."""
    h = as_matrix(h, square=True, name="H")
    d = np.diag(h)
    if np.any(d <= 0):
        raise np.linalg.LinAlgError("scaled condition needs a positive diagonal")
    s = 1.0 / np.sqrt(d)
    a = h * s[:, None] * s[None, :]
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    rep = solve_symmetric(a, variant=variant, p=min(p, n // 2), metrics=False)
    lam = rep.eigenvalues
    if np.any(lam <= 0):
        raise np.linalg.LinAlgError("matrix is not positive definite")
    return float(np.max(lam) / np.min(lam))


@dataclass
class Theorem1Check:
    passed: bool
    measured: float
    bound: float
    margin: float


def check_theorem1(report, u=None):
    """Compare ``||U~^T U~ - I||_2`` with the accumulated-rotation bound."""
    u = report.eigenvectors if u is None else u
    n = u.shape[0]
    measured = float(np.linalg.norm(u.T @ u - np.eye(n), 2))
    bound = theorem1_bound(report.stages, report.p, n)
    if bound == 0.0:
        margin = 0.0 if measured == 0.0 else float("inf")
    else:
        margin = measured / bound
    return Theorem1Check(passed=measured <= bound, measured=measured, bound=bound, margin=margin)


def match_sorted(computed, reference):
    """Pair two eigenvalue sets by sorting both."""
    return np.sort(np.asarray(computed, dtype=float)), np.sort(np.asarray(reference, dtype=float))


def relative_accuracy_report(report_or_eigs, oracle_eigs):
    """Per-eigenvalue relative errors ``|l' - l| / |l|`` after sorted matching.

    Returns ``(max_error, errors)``; errors follow ascending oracle order.
    """
    lam = getattr(report_or_eigs, "eigenvalues", report_or_eigs)
    c, ref = match_sorted(lam, oracle_eigs)
    if c.shape != ref.shape:
        raise ValueError("eigenvalue counts differ")
    if np.any(ref == 0):
        raise ZeroDivisionError("oracle eigenvalue is zero")
    err = np.abs(c - ref) / np.abs(ref)
    return float(np.max(err, initial=0.0)), err
