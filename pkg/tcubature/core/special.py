"""Log-space special functions and densities."""
import math
import typing as t

import numpy as np

from scipy import special

from ..exceptions import DofTooSmall, DomainError
from .linalg import cholesky_sqrt, log_det_from_cholesky, solve_lower


def ln_beta(a: float, b: float) -> float:
    """Natural log of the beta function ``B(a, b)``.

    :raises DomainError: ``a`` or ``b`` is not positive.

    """
    if not a > 0:
        raise DomainError("a", a, "a > 0")
    if not b > 0:
        raise DomainError("b", b, "b > 0")

    # lgamma(a) + lgamma(b) - lgamma(a + b) cancels badly for large a, b
    return float(special.betaln(a, b))


def _mahalanobis(x, mu, chol) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    mu = np.asarray(mu, dtype=float).reshape(-1)
    n = mu.shape[0]

    diff = np.atleast_2d(x).reshape(-1, n) - mu
    white = solve_lower(chol, diff.T)
    return np.sum(white**2, axis=0)


def student_t_logpdf(x, mu, sigma, nu: float) -> t.Union[float, np.ndarray]:
    """Log-density of the multivariate Student's t ``St(x; mu, sigma, nu)``.

    ``x`` is a single ``(n,)`` vector or a ``(k, n)`` batch; the return value
    is a float or a ``(k,)`` array respectively.

    :raises DofTooSmall: ``nu`` is not positive.
    :raises NotPositiveDefinite: ``sigma`` is not a valid scale matrix.

    """
    if not nu > 0:
        raise DofTooSmall(nu, minimum=0.0)
    if math.isinf(nu):
        return gaussian_logpdf(x, mu, sigma)

    mu = np.asarray(mu, dtype=float).reshape(-1)
    n = mu.shape[0]
    chol = cholesky_sqrt(sigma, name="sigma")

    maha = _mahalanobis(x, mu, chol)

    # ln G((nu + n) / 2) - ln G(nu / 2) == ln G(n / 2) - ln B(nu / 2, n / 2)
    log_norm = (
        special.gammaln(0.5 * n)
        - ln_beta(0.5 * nu, 0.5 * n)
        - 0.5 * n * math.log(nu * math.pi)
        - 0.5 * log_det_from_cholesky(chol)
    )
    out = log_norm - 0.5 * (nu + n) * np.log1p(maha / nu)

    if np.ndim(x) <= 1:
        return float(out[0])
    return out


def gaussian_logpdf(x, mu, sigma) -> t.Union[float, np.ndarray]:
    """Log-density of the multivariate normal ``N(x; mu, sigma)``."""
    mu = np.asarray(mu, dtype=float).reshape(-1)
    n = mu.shape[0]
    chol = cholesky_sqrt(sigma, name="sigma")

    maha = _mahalanobis(x, mu, chol)
    out = -0.5 * (
        n * math.log(2.0 * math.pi) + log_det_from_cholesky(chol) + maha
    )

    if np.ndim(x) <= 1:
        return float(out[0])
    return out


def student_t_covariance(scale, nu: float) -> np.ndarray:
    """Covariance ``nu / (nu - 2) * scale`` of a Student's t density."""
    if not nu > 2:
        raise DofTooSmall(nu)
    scale = np.asarray(scale, dtype=float)
    if math.isinf(nu):
        return scale.copy()
    return nu / (nu - 2.0) * scale
