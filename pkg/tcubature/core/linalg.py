"""Cholesky factors, symmetrization and triangular solves.

Every inverse in the package goes through the routines here: a matrix is
factorised once with :func:`cholesky_sqrt` and then used with
:func:`solve_lower` or :func:`cho_solve_lower`.

"""
import typing as t

import numpy as np

from scipy import linalg

from ..exceptions import NotPositiveDefinite

SpdMatrix = np.ndarray
"""A symmetric positive definite ``(n, n)`` array."""

SYMMETRY_RTOL = 1e-12


def as_matrix(a, name: t.Optional[str] = None) -> np.ndarray:
    """Coerce ``a`` to a square float matrix.

    Scalars become ``(1, 1)`` matrices and 1-D arrays are read as a
    diagonal.

    """
    m = np.asarray(a, dtype=float)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    elif m.ndim == 1:
        m = np.diag(m)

    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotPositiveDefinite(m, name=name)

    return m


def symmetrize(a: np.ndarray) -> np.ndarray:
    """Return ``(A + A^T) / 2``."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a + a.T)


def is_symmetric(a: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    a = np.asarray(a, dtype=float)
    scale = max(np.linalg.norm(a), 1e-300)
    return bool(np.linalg.norm(a - a.T) <= rtol * scale)


def cholesky_sqrt(sigma, name: t.Optional[str] = None) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == sigma``.

    :param sigma: Symmetric positive definite matrix, symmetric to within
        ``SYMMETRY_RTOL`` relative (Frobenius); it is not symmetrized.
    :param name: Name of the matrix, used in error messages.

    :raises NotPositiveDefinite: ``sigma`` is not square, not symmetric, not
        finite or a pivot is not positive.

    """
    sigma = as_matrix(sigma, name=name)

    if not np.all(np.isfinite(sigma)) or not is_symmetric(sigma):
        raise NotPositiveDefinite(sigma, name=name)

    try:
        chol = linalg.cholesky(sigma, lower=True, check_finite=False)
    except linalg.LinAlgError:
        raise NotPositiveDefinite(sigma, name=name)

    if not np.all(np.diag(chol) > 0.0):
        raise NotPositiveDefinite(sigma, name=name)

    return chol


def is_positive_definite(a) -> bool:
    try:
        cholesky_sqrt(a)
    except NotPositiveDefinite:
        return False
    return True


def is_positive_semidefinite(a, atol: float = 1e-12) -> bool:
    """Check symmetry and that no eigenvalue is below ``-atol * ||A||``."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or not np.all(np.isfinite(a)) or not is_symmetric(a):
        return False
    scale = max(np.linalg.norm(a), 1.0)
    return bool(np.min(np.linalg.eigvalsh(a)) >= -atol * scale)


def solve_lower(chol: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``L x = b`` for lower-triangular ``L``."""
    return linalg.solve_triangular(chol, b, lower=True, check_finite=False)


def cho_solve_lower(chol: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``(L L^T) x = b`` given the lower Cholesky factor ``L``."""
    return linalg.cho_solve((chol, True), b, check_finite=False)


def log_det_from_cholesky(chol: np.ndarray) -> float:
    return float(2.0 * np.sum(np.log(np.diag(chol))))
