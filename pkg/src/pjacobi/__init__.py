"""Parallel one-sided Jacobi eigensolvers for symmetric indefinite matrices."""

from .engine import ALGORITHMS, NonConvergenceError, WorkerError
from .factorizations import (
    NotPositiveDefiniteError,
    RankDeficiencyError,
    bunch_parlett_complete,
    cholesky_diag_pivoted,
    cholesky_sign_pivoted,
    cholesky_unpivoted,
)
from .generate import example1, graded, random_symmetric
from .matrix import ConfigurationError
from .oracle import cyclic_jacobi, extended_eigvals
from .solver import (
    check_theorem1,
    relative_accuracy_report,
    scaled_condition,
    solve_symmetric,
    theorem1_bound,
)
from .strategy import sweep_schedule

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "ConfigurationError",
    "NonConvergenceError",
    "NotPositiveDefiniteError",
    "RankDeficiencyError",
    "WorkerError",
    "bunch_parlett_complete",
    "check_theorem1",
    "cholesky_diag_pivoted",
    "cholesky_sign_pivoted",
    "cholesky_unpivoted",
    "cyclic_jacobi",
    "example1",
    "extended_eigvals",
    "graded",
    "random_symmetric",
    "relative_accuracy_report",
    "scaled_condition",
    "solve_symmetric",
    "sweep_schedule",
    "theorem1_bound",
]
