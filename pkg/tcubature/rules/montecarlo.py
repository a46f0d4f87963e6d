import typing as t

import numpy as np

from ..core import RngStream, sample_multivariate_student_t
from . import CubaturePointSet, IntegrationRule, StudentTDensity


class MonteCarlo(IntegrationRule):
    """Plain Monte Carlo: ``N`` draws from the density, weight ``1 / N``.

    Unlike the cubature rules any ``nu > 0`` is accepted.

    """

    name = "mc"

    stochastic = True

    min_dof = 0.0

    def point_set(
        self,
        density: StudentTDensity,
        rng: t.Optional[RngStream] = None,
    ) -> CubaturePointSet:
        self.check_density(density)
        self._require_rng(rng)

        samples = self.n_samples
        points = sample_multivariate_student_t(
            rng,
            density.mean,
            density.scale,
            density.nu,
            size=samples,
            chol=density.sqrt,
        )
        weights = np.full(samples, 1.0 / samples)

        return CubaturePointSet(
            points=points, weights=weights, samples=samples
        )

    def sample_estimates(self, g, density, rng=None, count: int = 1):
        draws = MonteCarlo(n_samples=count * self.n_samples)
        values = draws.point_set(density, rng).evaluate(g, rule=self.name)

        shape = (count, self.n_samples, *values.shape[1:])
        return values.reshape(shape).mean(axis=1)


def mc_integrate(
    g,
    density: StudentTDensity,
    n_samples: int,
    rng: RngStream,
) -> np.ndarray:
    """Approximate ``E[g(x)]`` by averaging ``g`` over ``N`` density draws.

    :raises NonFiniteIntegrand: ``g`` returns non-finite values.

    """
    return MonteCarlo(n_samples=n_samples).integrate(g, density, rng)
