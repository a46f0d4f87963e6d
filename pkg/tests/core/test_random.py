import math

import numpy as np
import pytest

from scipy import stats

from tcubature.core import (
    RngStream,
    sample_beta,
    sample_gamma,
    sample_haar_orthogonal,
    sample_multivariate_normal,
    sample_multivariate_student_t,
    sample_standard_normal,
)
from tcubature.exceptions import DofTooSmall, DomainError


def test_stream_reproducible():
    a = RngStream(7, 3).generator.random(5)
    b = RngStream(7, 3).generator.random(5)

    assert np.array_equal(a, b)


def test_streams_differ():
    a = RngStream(7, 3).generator.random(5)
    b = RngStream(7, 4).generator.random(5)
    c = RngStream(8, 3).generator.random(5)

    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_derive():
    rng = RngStream(7, 3)
    child = rng.derive(1, 2)

    assert child.seed == 7
    assert child.stream == (3, 1, 2)
    assert np.array_equal(
        child.generator.random(3), RngStream(7, (3, 1, 2)).generator.random(3)
    )


def test_stream_out_of_range():
    with pytest.raises(DomainError):
        RngStream(-1)

    with pytest.raises(DomainError):
        RngStream(0, 2**64)


def test_sample_gamma_mean(rng):
    draws = sample_gamma(rng, 3.0, 2.0, size=200_000)

    assert np.mean(draws) == pytest.approx(1.5, rel=0.01)


def test_sample_gamma_domain(rng):
    with pytest.raises(DomainError):
        sample_gamma(rng, 0.0)

    with pytest.raises(DomainError):
        sample_gamma(rng, 1.0, rate=-1.0)


def test_sample_beta_mean(rng):
    draws = sample_beta(rng, 2.0, 3.0, size=200_000)

    assert np.all((draws >= 0) & (draws <= 1))
    assert np.mean(draws) == pytest.approx(0.4, rel=0.01)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_sample_haar_orthogonal(rng, n):
    q = sample_haar_orthogonal(rng, n)

    assert q.shape == (n, n)
    assert np.allclose(q @ q.T, np.eye(n))


def test_sample_haar_orthogonal_stack(rng):
    q = sample_haar_orthogonal(rng, 3, size=10)

    assert q.shape == (10, 3, 3)
    assert np.allclose(q @ np.swapaxes(q, -1, -2), np.eye(3))


def test_sample_haar_orthogonal_uniform(rng):
    # E[Q] = 0 under the Haar measure; QR without the sign fix is biased
    q = sample_haar_orthogonal(rng, 2, size=50_000)

    assert np.allclose(q.mean(axis=0), 0.0, atol=0.02)


def test_sample_multivariate_normal(rng):
    sigma = np.array([[2.0, 0.5], [0.5, 1.0]])
    draws = sample_multivariate_normal(rng, [1.0, -1.0], sigma, 200_000)

    assert np.allclose(draws.mean(axis=0), [1.0, -1.0], atol=0.02)
    assert np.allclose(np.cov(draws.T), sigma, rtol=0.03, atol=0.02)


def test_sample_multivariate_student_t(rng):
    sigma = np.array([[2.0, 0.5], [0.5, 1.0]])
    nu = 8.0
    draws = sample_multivariate_student_t(rng, [0.0, 0.0], sigma, nu, 400_000)

    cov = nu / (nu - 2.0) * sigma
    assert np.allclose(np.cov(draws.T), cov, rtol=0.05, atol=0.03)


def test_sample_multivariate_student_t_gaussian(rng):
    draws = sample_multivariate_student_t(rng, [0.0], [[1.0]], math.inf, 10)

    assert draws.shape == (10, 1)


def test_sample_multivariate_student_t_dof(rng):
    with pytest.raises(DofTooSmall):
        sample_multivariate_student_t(rng, [0.0], [[1.0]], 0.0)


def test_sample_standard_normal(rng):
    size = 200_000
    draws = sample_standard_normal(rng, size)

    assert abs(np.mean(draws)) <= 4.0 / math.sqrt(size)
    assert abs(np.var(draws) - 1.0) <= 4.0 * math.sqrt(2.0 / size)


def test_sample_standard_normal_replay():
    a = sample_standard_normal(RngStream(5, 1), 10)
    b = sample_standard_normal(RngStream(5, 1), 10)

    assert np.array_equal(a, b)
    assert isinstance(sample_standard_normal(RngStream(5, 1)), float)


def test_sample_gamma_exponential(rng):
    # Gamma(1, rate) is Exponential(rate)
    draws = sample_gamma(rng, 1.0, 2.0, size=20_000)

    pvalue = stats.kstest(draws, stats.expon(scale=0.5).cdf).pvalue
    assert pvalue > 1e-3


def test_sample_beta_uniform(rng):
    draws = sample_beta(rng, 1.0, 1.0, size=20_000)

    assert stats.kstest(draws, stats.uniform().cdf).pvalue > 1e-3


def test_sample_haar_orthogonal_sign(rng):
    size = 20_000
    q = sample_haar_orthogonal(rng, 1, size=size)

    assert np.all(np.abs(q) == 1.0)
    assert abs(np.mean(q > 0) - 0.5) <= 4 * 0.5 / math.sqrt(size)


def test_sample_haar_orthogonal_column_moment(rng):
    q = sample_haar_orthogonal(rng, 3, size=50_000)
    column = q[:, :, 0]

    second = np.einsum("ki,kj->ij", column, column) / column.shape[0]

    assert np.allclose(second, np.eye(3) / 3.0, atol=0.01)


def test_sample_haar_orthogonal_determinant(rng):
    q = sample_haar_orthogonal(rng, 4, size=100)

    assert np.allclose(np.abs(np.linalg.det(q)), 1.0)
