"""Linear algebra, special functions and random sampling primitives."""
from .linalg import (
    SpdMatrix,
    as_matrix,
    cho_solve_lower,
    cholesky_sqrt,
    is_positive_definite,
    is_positive_semidefinite,
    is_symmetric,
    solve_lower,
    symmetrize,
)
from .random import (
    RngStream,
    sample_beta,
    sample_gamma,
    sample_haar_orthogonal,
    sample_multivariate_normal,
    sample_multivariate_student_t,
    sample_standard_normal,
)
from .special import (
    gaussian_logpdf,
    ln_beta,
    student_t_covariance,
    student_t_logpdf,
)

__all__ = [
    "RngStream",
    "SpdMatrix",
    "as_matrix",
    "cho_solve_lower",
    "cholesky_sqrt",
    "gaussian_logpdf",
    "is_positive_definite",
    "is_positive_semidefinite",
    "is_symmetric",
    "ln_beta",
    "sample_beta",
    "sample_gamma",
    "sample_haar_orthogonal",
    "sample_multivariate_normal",
    "sample_multivariate_student_t",
    "sample_standard_normal",
    "solve_lower",
    "student_t_covariance",
    "student_t_logpdf",
    "symmetrize",
]
