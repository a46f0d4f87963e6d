import math

import numpy as np
import pytest

from tcubature.exceptions import DofTooSmall
from tcubature.rules import Integrand, StudentTDensity
from tcubature.rules.deterministic import (
    STSRCR,
    deterministic_stsrcr_integrate,
)


def test_points_univariate():
    density = StudentTDensity([0.0], [[1.0]], 5.0)
    points = STSRCR().point_set(density)

    c = math.sqrt(5.0 / 3.0)
    assert sorted(points.points[:, 0]) == pytest.approx([-c, c])
    assert np.allclose(points.weights, [0.5, 0.5])


def test_points_count(density):
    points = STSRCR().point_set(density)

    assert len(points) == 2 * density.dim
    assert points.weight_sum == pytest.approx(1.0, abs=1e-12)


def test_integrate_mean(density):
    value = deterministic_stsrcr_integrate(lambda x: x, density)

    assert np.allclose(value, density.mean)


def test_integrate_covariance(density):
    mu = density.mean

    def g(x):
        y = x - mu
        return np.einsum("ki,kj->kij", y, y)

    value = deterministic_stsrcr_integrate(
        Integrand(g, vectorized=True), density
    )

    assert np.allclose(value, density.covariance)


def test_deterministic():
    density = StudentTDensity([0.3, 0.1], np.eye(2), 6.0)

    a = deterministic_stsrcr_integrate(np.cos, density)
    b = deterministic_stsrcr_integrate(np.cos, density)

    assert np.array_equal(a, b)


def test_dof():
    with pytest.raises(DofTooSmall):
        deterministic_stsrcr_integrate(
            lambda x: x, StudentTDensity([0.0], [[1.0]], 1.9)
        )
