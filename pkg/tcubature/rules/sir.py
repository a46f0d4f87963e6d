"""The stochastic integration rule for Gaussian-weighted integrals.

The Gaussian limit of the stochastic Student's t rule: points
``{mu; mu -/+ rho L Q e_i}`` with ``rho^2`` chi-square with ``n + 2``
degrees of freedom and weights ``1 - n / rho^2`` and ``1 / (2 rho^2)``.

"""
import typing as t

import numpy as np

from ..core import RngStream, sample_gamma, sample_haar_orthogonal
from . import (
    CubaturePointSet,
    StudentTDensity,
    per_sample_estimates,
    symmetric_point_set,
)
from .stochastic import RadialRule


class SIR(RadialRule):
    """Stochastic integration rule; ignores ``nu`` of the density.

    :param n_samples: Number of independent samples ``N`` averaged.
    :param min_radius: Radii below this are redrawn; defaults to ``1e-8``.

    """

    name = "sir"

    student_t = False

    def draw_radii(self, rng: RngStream, n: int, size: int) -> np.ndarray:
        def draw(k):
            return np.sqrt(2.0 * sample_gamma(rng, 0.5 * (n + 2), 1.0, k))

        return self.guarded_radii(draw, size)

    def point_set(
        self,
        density: StudentTDensity,
        rng: t.Optional[RngStream] = None,
    ) -> CubaturePointSet:
        axes, centre, side = self._draw(density, rng, self.n_samples)
        return symmetric_point_set(density.mean, axes, centre, side)

    def sample_estimates(self, g, density, rng=None, count: int = 1):
        axes, centre, side = self._draw(density, rng, count * self.n_samples)

        estimates = per_sample_estimates(
            g, density.mean, axes, centre, side, rule=self.name
        )
        shape = (count, self.n_samples, *estimates.shape[1:])
        return estimates.reshape(shape).mean(axis=1)

    def _draw(self, density, rng, samples):
        self._require_rng(rng)

        n = density.dim

        q = sample_haar_orthogonal(rng, n, size=samples)
        rho = self.draw_radii(rng, n, samples)

        axes = rho[:, np.newaxis, np.newaxis] * (density.sqrt @ q)

        rho2 = rho**2
        centre = 1.0 - n / rho2
        side = 1.0 / (2.0 * rho2)

        return axes, centre, side


def sir_integrate(g, mu, sigma, n_samples: int, rng: RngStream) -> np.ndarray:
    """Approximate ``E[g(x)]`` for ``x ~ N(mu, sigma)`` with the SIR.

    :raises NonFiniteIntegrand: ``g`` returns non-finite values.

    """
    density = StudentTDensity.gaussian(mu, sigma)
    return SIR(n_samples=n_samples).integrate(g, density, rng)
