"""Reference values and consistency diagnostics for the integration rules."""
import math
import typing as t

from dataclasses import dataclass

import numpy as np

from scipy import integrate, stats

from ..core import RngStream
from . import StudentTDensity, as_integrand
from .sir import SIR
from .stochastic import SSTSRCR

LIMIT_DOF = 1e8


def _projection(a, mu, sigma):
    a = np.atleast_1d(np.asarray(a, dtype=float))
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    sigma = np.atleast_2d(np.asarray(sigma, dtype=float))

    loc = float(a @ mu)
    scale = math.sqrt(float(a @ sigma @ a))

    return loc, scale


def gaussian_cos_expectation(a, mu, sigma) -> float:
    """``E[cos(a^T x)]`` for ``x ~ N(mu, sigma)``, in closed form."""
    loc, scale = _projection(a, mu, sigma)
    return math.cos(loc) * math.exp(-0.5 * scale**2)


def student_t_cos_expectation(a, mu, sigma, nu: float) -> float:
    """``E[cos(a^T x)]`` for ``x ~ St(mu, sigma, nu)`` by quadrature.

    ``a^T x`` is a univariate Student's t with location ``a^T mu`` and
    scale ``sqrt(a^T sigma a)``, so the sine part vanishes and the cosine
    part is a one-sided Fourier integral of the standard t density.

    """
    if math.isinf(nu):
        return gaussian_cos_expectation(a, mu, sigma)

    loc, scale = _projection(a, mu, sigma)
    if scale == 0.0:
        return math.cos(loc)

    value, _ = integrate.quad(
        stats.t(nu).pdf, 0.0, np.inf, weight="cos", wvar=scale
    )

    return math.cos(loc) * 2.0 * value


@dataclass
class LimitConsistencyReport:
    """Stochastic Student's t rule at large ``nu`` against the SIR."""

    student_t: np.ndarray
    gaussian: np.ndarray
    nu: float

    @property
    def gap(self) -> float:
        return float(np.max(np.abs(self.student_t - self.gaussian)))

    @property
    def relative_gap(self) -> float:
        scale = max(float(np.max(np.abs(self.gaussian))), 1e-300)
        return self.gap / scale


def limit_consistency_check(
    g,
    mu,
    sigma,
    n_samples: int,
    seed: int,
    nu: float = LIMIT_DOF,
) -> LimitConsistencyReport:
    """Integrate ``g`` with the stochastic rule at ``nu`` and with the SIR.

    Both rules use ``n_samples`` samples; their streams are derived from
    ``seed`` as streams ``0`` and ``1``.

    """
    g = as_integrand(g)
    rng = RngStream(seed)

    density = StudentTDensity(mu, sigma, nu)

    student_t = SSTSRCR(n_samples).integrate(g, density, rng.derive(0))
    gaussian = SIR(n_samples).integrate(
        g, StudentTDensity.gaussian(mu, sigma), rng.derive(1)
    )

    return LimitConsistencyReport(
        student_t=np.asarray(student_t),
        gaussian=np.asarray(gaussian),
        nu=nu,
    )


def student_t_moments(
    density: StudentTDensity,
) -> t.Tuple[np.ndarray, np.ndarray]:
    """Mean and covariance of ``density``; the covariance needs ``nu > 2``."""
    return density.mean.copy(), density.covariance
