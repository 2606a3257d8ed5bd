"""Recursive least squares that exploits rank deficiency.

Maintains a rank factorization of the growing observation matrix so that each
new observation updates the minimum-norm least-squares solution in O(mr)
operations, with optional pseudoinverse (O(mn)) and covariance (O(m^2))
tracking, over either float64 or exact rational arithmetic.
"""

from .scalars import FLOAT64, RATIONAL, KINDS, CapabilityError, ScalarKind
from .solver import (
    EpsPolicy,
    ProjectionResult,
    RecursiveSolver,
    UpdateReport,
    VARIANTS,
    solve_batch,
)
from .tracking import CovarianceTracker, PseudoinverseTracker, pinv_from_scratch
from .matrices import (
    FAMILIES,
    ExactnessWarning,
    MatrixSpec,
    UsvFactors,
    generate,
    ill_conditioned_power,
    kahan,
    pascal,
    random_standardized,
    random_usv,
    read_matrix,
    read_vector,
    write_matrix,
)
from .metrics import (
    SvdConvergenceError,
    SvdResult,
    cond2,
    min_norm_lstsq,
    penrose_residuals,
    pinv_via_svd,
    residual_error,
    stability_factor,
    svd_small,
    two_norm,
)
from . import exact

__version__ = "0.1.0"

__all__ = [
    "FLOAT64",
    "RATIONAL",
    "KINDS",
    "CapabilityError",
    "ScalarKind",
    "EpsPolicy",
    "ProjectionResult",
    "RecursiveSolver",
    "UpdateReport",
    "VARIANTS",
    "solve_batch",
    "CovarianceTracker",
    "PseudoinverseTracker",
    "pinv_from_scratch",
    "FAMILIES",
    "ExactnessWarning",
    "MatrixSpec",
    "UsvFactors",
    "generate",
    "ill_conditioned_power",
    "kahan",
    "pascal",
    "random_standardized",
    "random_usv",
    "read_matrix",
    "read_vector",
    "write_matrix",
    "SvdConvergenceError",
    "SvdResult",
    "cond2",
    "min_norm_lstsq",
    "penrose_residuals",
    "pinv_via_svd",
    "residual_error",
    "stability_factor",
    "svd_small",
    "two_norm",
    "exact",
    "__version__",
]
