"""The stochastic Student's t spherical-radial cubature rule.

One sample of the rule draws a Haar-orthogonal ``Q`` and a radius ``r`` and
places ``2n + 1`` points at ``{mu; mu -/+ r sqrt(nu) L Q e_i}`` with weights
``1 - n / ((nu - 2) r^2)`` for the centre and ``1 / (2 (nu - 2) r^2)`` for
each other point. With ``r^2 = tau / (1 - tau)`` and
``tau ~ Beta((n + 2) / 2, (nu - 2) / 2)`` every sample is exact for
polynomials up to degree three and unbiased for any integrand.

"""
import math
import typing as t

import numpy as np

from ..core import RngStream, sample_beta, sample_haar_orthogonal
from ..exceptions import DofTooSmall
from ..signals import on_radial_redraw
from . import (
    CubaturePointSet,
    IntegrationRule,
    StudentTDensity,
    per_sample_estimates,
    symmetric_point_set,
)

RADIUS_FLOOR = 1e-8


def redraw_radii(draw: t.Callable[[int], np.ndarray], size: int, floor):
    """Draw ``size`` radii with ``draw(k)``, redrawing any below ``floor``.

    Non-finite draws are redrawn too.

    :return: ``(radii, rejected)``, ``rejected`` holding every draw that was
        thrown away.

    """
    radii = np.empty(size)
    todo = np.arange(size)
    rejected = []

    while todo.size:
        with np.errstate(divide="ignore", invalid="ignore"):
            r = draw(todo.size)

        radii[todo] = r
        bad = ~(np.isfinite(r) & (r >= floor))
        rejected.append(r[bad])
        todo = todo[bad]

    return radii, np.concatenate(rejected)


def _student_t_radii(rng: RngStream, n: int, nu: float):
    alpha, beta = 0.5 * (n + 2), 0.5 * (nu - 2)

    def draw(size):
        tau = sample_beta(rng, alpha, beta, size)
        return np.sqrt(tau / (1.0 - tau))

    return draw


def sample_radial_point(
    rng: RngStream,
    n: int,
    nu: float,
    size: t.Optional[int] = None,
):
    """Draw the random radius ``r2`` of the stochastic rule.

    :raises DofTooSmall: ``nu <= 2``.

    """
    if not nu > 2:
        raise DofTooSmall(nu)

    radii, _ = redraw_radii(
        _student_t_radii(rng, n, nu), 1 if size is None else size, 0.0
    )
    if size is None:
        return float(radii[0])
    return radii


class RadialRule(IntegrationRule):
    """Base class of the rules drawing a random radius per sample.

    :param n_samples: Number of independent samples ``N`` averaged.
    :param min_radius: Radii below this are redrawn; defaults to ``1e-8``.

    """

    stochastic = True

    def __init__(self, n_samples: int = 1, min_radius=RADIUS_FLOOR, **kwargs):
        self.min_radius = min_radius

        self.redraws = 0
        """Number of radii rejected by the ``min_radius`` guard."""

        super().__init__(n_samples=n_samples, **kwargs)

    def guarded_radii(self, draw: t.Callable[[int], np.ndarray], size: int):
        radii, rejected = redraw_radii(draw, size, self.min_radius)

        if rejected.size:
            self.redraws += rejected.size

            on_radial_redraw.send(self, radius=rejected)

            self.logger.debug(
                "Redrew %d radii below %g", rejected.size, self.min_radius
            )

        return radii


class SSTSRCR(RadialRule):
    """Stochastic Student's t spherical-radial cubature rule.

    :param n_samples: Number of independent samples ``N`` averaged.
    :param min_radius: Radii below this are redrawn; defaults to ``1e-8``.

    """

    name = "sstsrcr"

    def draw_radii(self, rng: RngStream, n: int, nu: float, size: int):
        return self.guarded_radii(_student_t_radii(rng, n, nu), size)

    def point_set(
        self,
        density: StudentTDensity,
        rng: t.Optional[RngStream] = None,
        radius: t.Optional[float] = None,
    ) -> CubaturePointSet:
        """Realise ``N`` samples of the rule as one weighted point set.

        :param radius: Use this radius for every sample instead of drawing
            it; the orthogonal matrices are still drawn.

        """
        axes, centre, side = self._draw(density, rng, self.n_samples, radius)
        return symmetric_point_set(density.mean, axes, centre, side)

    def sample_estimates(self, g, density, rng=None, count: int = 1):
        samples = count * self.n_samples
        axes, centre, side = self._draw(density, rng, samples)

        estimates = per_sample_estimates(
            g, density.mean, axes, centre, side, rule=self.name
        )
        shape = (count, self.n_samples, *estimates.shape[1:])
        return estimates.reshape(shape).mean(axis=1)

    def _draw(self, density, rng, samples, radius=None):
        self.check_density(density)
        self._require_rng(rng)

        n, nu = density.dim, density.nu

        # Q_l is drawn before r_l, shared by the 2n points of sample l
        q = sample_haar_orthogonal(rng, n, size=samples)
        if radius is None:
            r = self.draw_radii(rng, n, nu, samples)
        else:
            r = np.full(samples, float(radius))

        axes = (math.sqrt(nu) * r)[:, np.newaxis, np.newaxis] * (
            density.sqrt @ q
        )

        r2 = r**2
        centre = 1.0 - n / ((nu - 2.0) * r2)
        side = 1.0 / (2.0 * (nu - 2.0) * r2)

        return axes, centre, side


def build_sstsrcr_points(
    rng: RngStream,
    density: StudentTDensity,
    radius: t.Optional[float] = None,
) -> CubaturePointSet:
    """Return the ``2n + 1`` points of a single rule sample.

    :raises DofTooSmall: ``density.nu <= 2``.
    :raises NotPositiveDefinite: invalid scale matrix.

    """
    return SSTSRCR(n_samples=1).point_set(density, rng, radius=radius)


def sstsrcr_integrate(
    g,
    density: StudentTDensity,
    n_samples: int,
    rng: RngStream,
) -> np.ndarray:
    """Approximate ``E[g(x)]`` with ``N`` samples of the stochastic rule.

    :raises DofTooSmall: ``density.nu <= 2``.
    :raises NonFiniteIntegrand: ``g`` returns non-finite values.

    """
    return SSTSRCR(n_samples=n_samples).integrate(g, density, rng)
