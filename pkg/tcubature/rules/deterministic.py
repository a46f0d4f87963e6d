import math

import numpy as np

from . import CubaturePointSet, IntegrationRule, StudentTDensity


class STSRCR(IntegrationRule):
    """Third-degree Student's t spherical-radial cubature rule.

    The stochastic rule with its radius fixed at ``r^2 = n / (nu - 2)``:
    the centre weight vanishes, leaving ``2n`` points
    ``mu -/+ sqrt(n nu / (nu - 2)) L e_i`` of weight ``1 / (2n)``.

    """

    name = "stsrcr"

    def point_set(self, density: StudentTDensity, rng=None):
        self.check_density(density)

        n, nu = density.dim, density.nu
        c = math.sqrt(n * nu / (nu - 2.0))

        offsets = c * density.sqrt.T
        points = np.concatenate(
            [density.mean - offsets, density.mean + offsets]
        )
        weights = np.full(2 * n, 1.0 / (2 * n))

        return CubaturePointSet(points=points, weights=weights)


def deterministic_stsrcr_integrate(g, density: StudentTDensity) -> np.ndarray:
    """Approximate ``E[g(x)]`` with the deterministic third-degree rule.

    :raises DofTooSmall: ``density.nu <= 2``.

    """
    return STSRCR().integrate(g, density)
