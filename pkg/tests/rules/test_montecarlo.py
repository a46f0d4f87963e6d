import math

import numpy as np
import pytest

from tcubature.exceptions import DofTooSmall
from tcubature.rules import Integrand, StudentTDensity
from tcubature.rules.diagnostics import student_t_cos_expectation
from tcubature.rules.montecarlo import MonteCarlo, mc_integrate


def test_constant(rng, density):
    value = mc_integrate(lambda x: 1.0, density, 100, rng)

    assert value == pytest.approx(1.0)


def test_weights(rng, density):
    points = MonteCarlo(50).point_set(density, rng)

    assert len(points) == 50
    assert np.all(points.weights == 1.0 / 50)


def test_mean(rng):
    density = StudentTDensity([1.0, -1.0], np.eye(2), 5.0)
    g = Integrand(lambda x: x, vectorized=True)

    estimates = MonteCarlo(1).sample_estimates(g, density, rng, count=10**6)

    se = estimates.std(axis=0, ddof=1) / math.sqrt(len(estimates))
    assert np.all(np.abs(estimates.mean(axis=0) - density.mean) <= 4 * se)


def test_cos(rng):
    density = StudentTDensity([0.0], [[1.0]], 5.0)
    g = Integrand(lambda x: np.cos(x[:, 0]), vectorized=True)

    estimates = MonteCarlo(1).sample_estimates(g, density, rng, count=10**6)
    oracle = student_t_cos_expectation([1.0], [0.0], [[1.0]], 5.0)

    se = np.std(estimates, ddof=1) / math.sqrt(estimates.size)
    assert abs(np.mean(estimates) - oracle) <= 4 * se


def test_low_dof(rng):
    # any nu > 0 is accepted
    density = StudentTDensity([0.0], [[1.0]], 1.0)

    assert mc_integrate(lambda x: 1.0, density, 10, rng) == pytest.approx(1.0)

    with pytest.raises(DofTooSmall):
        density = StudentTDensity([0.0], [[1.0]], 0.0)
        mc_integrate(lambda x: 1.0, density, 1, rng)
