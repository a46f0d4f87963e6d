import numpy as np
import pytest

from tcubature.core import RngStream
from tcubature.exceptions import ConfigError
from tcubature.filters import (
    GaussianEstimate,
    NoiseSpec,
    StateEstimate,
    SystemModel,
    filter_class,
)
from tcubature.filters.gaussian import SIF, sif_step
from tcubature.filters.student_t import (
    RSTCF,
    RSTMCF,
    RSTSCF,
    StudentTFilter,
    rstscf_step,
)
from tcubature.rules.sir import SIR
from tcubature.rules.stochastic import SSTSRCR

NU_LIMIT = 1e8

F = np.array(
    [
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)
H = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
Q = np.diag([0.01, 0.01, 0.1, 0.1])
R = np.diag([0.5, 0.5])


@pytest.fixture
def linear_model():
    return SystemModel(
        lambda x: x @ F.T, lambda x: x @ H.T, vectorized=True
    )


def kalman_step(mean, cov, z):
    mean = F @ mean
    cov = F @ cov @ F.T + Q

    s = H @ cov @ H.T + R
    gain = cov @ H.T @ np.linalg.inv(s)

    return mean + gain @ (z - H @ mean), cov - gain @ s @ gain.T


def measurements(steps=20):
    gen = np.random.default_rng(5)
    return gen.normal(scale=3.0, size=(steps, 2)) + np.arange(steps)[:, None]


def test_rules():
    assert isinstance(RSTSCF().rule, SSTSRCR)
    assert RSTSCF().rule.n_samples == 100
    assert RSTSCF(7).rule.n_samples == 7
    assert RSTCF().rule.name == "stsrcr"
    assert RSTMCF().rule.n_samples == 10000
    assert isinstance(SIF().rule, SIR)


def test_rule_override():
    f = StudentTFilter(3, rule="mc")

    assert f.rule.name == "mc"
    assert f.rule.n_samples == 3


def test_student_t_filter_rejects_gaussian_rule():
    with pytest.raises(ConfigError) as exc_info:
        RSTSCF(rule="sir")

    assert exc_info.value.key == "rule"


def test_initial_estimates():
    p0 = np.diag([1.0, 2.0, 0.1, 0.1])

    state = RSTSCF().initial_estimate(np.zeros(4), p0, 5.0)
    assert state.nu == 5.0
    assert np.array_equal(state.scale, p0)

    state = SIF().initial_estimate(np.zeros(4), p0, 5.0)
    assert isinstance(state, GaussianEstimate)
    assert state.density.is_gaussian


def test_rstscf_matches_kalman_filter(linear_model):
    mean, cov = np.zeros(4), np.eye(4)
    state = StateEstimate(mean, cov, NU_LIMIT)
    q_spec = NoiseSpec(Q, NU_LIMIT)
    r_spec = NoiseSpec(R, NU_LIMIT)
    rng = RngStream(3)

    for z in measurements():
        mean, cov = kalman_step(mean, cov, z)
        state = rstscf_step(state, z, linear_model, q_spec, r_spec, 5, rng)

        assert np.allclose(state.mean, mean, rtol=1e-6, atol=1e-6)
        assert np.allclose(state.scale, cov, rtol=1e-6, atol=1e-8)


def test_sif_matches_kalman_filter(linear_model):
    mean, cov = np.zeros(4), np.eye(4)
    state = GaussianEstimate(mean, cov)
    rng = RngStream(4)

    for z in measurements():
        mean, cov = kalman_step(mean, cov, z)
        state = sif_step(state, z, linear_model, Q, R, 5, rng)

        assert np.allclose(state.mean, mean, rtol=1e-8, atol=1e-8)
        assert np.allclose(state.covariance, cov, rtol=1e-8, atol=1e-10)


def test_sif_ignores_noise_dof(linear_model):
    state = GaussianEstimate(np.zeros(4), np.eye(4))
    z = np.array([1.0, -1.0])

    a, _ = SIF(5).step(
        state, z, linear_model, NoiseSpec(Q, 4.0), NoiseSpec(R, 4.0),
        RngStream(1),
    )
    b, _ = SIF(5).step(
        state, z, linear_model, NoiseSpec(Q), NoiseSpec(R), RngStream(1)
    )

    assert np.array_equal(a.mean, b.mean)
    assert np.array_equal(a.scale, b.scale)


def test_step_reproducible(linear_model):
    state = StateEstimate(np.zeros(4), np.eye(4), 5.0)
    q_spec, r_spec = NoiseSpec(Q, 5.0), NoiseSpec(R, 5.0)
    z = np.array([0.5, 2.0])

    a = rstscf_step(state, z, linear_model, q_spec, r_spec, 10, RngStream(8))
    b = rstscf_step(state, z, linear_model, q_spec, r_spec, 10, RngStream(8))

    assert np.array_equal(a.mean, b.mean)
    assert np.array_equal(a.scale, b.scale)


@pytest.mark.parametrize("n_samples", [1, 100])
def test_step_nonlinear(n_samples):
    model = SystemModel(
        lambda x: x @ F.T,
        lambda x: np.arctan2(x[:, 1] - 1.0, x[:, 0] + 2.0)[:, None],
        vectorized=True,
    )
    state = StateEstimate([3.0, 4.0, 0.1, 0.0], np.eye(4), 5.0)

    state = rstscf_step(
        state,
        [0.6],
        model,
        NoiseSpec(Q, 5.0),
        NoiseSpec([[1e-3]], 5.0),
        n_samples,
        RngStream(2),
    )

    assert np.all(np.isfinite(state.mean))
    assert np.all(np.linalg.eigvalsh(state.scale) > 0)


def test_literal_integrals(linear_model):
    state = StateEstimate(np.zeros(4), np.eye(4), 5.0)
    q_spec, r_spec = NoiseSpec(Q, 5.0), NoiseSpec(R, 5.0)
    z = np.array([0.5, 2.0])

    shared, _ = RSTCF().step(state, z, linear_model, q_spec, r_spec)
    literal, _ = RSTCF(shared_points=False).step(
        state, z, linear_model, q_spec, r_spec
    )

    assert np.allclose(shared.mean, literal.mean)
    assert np.allclose(shared.scale, literal.scale)


def test_filter_class():
    assert filter_class("rstscf") is RSTSCF
    assert filter_class("sif") is SIF
    assert filter_class("tcubature.filters.student_t.RSTCF") is RSTCF


@pytest.mark.parametrize(
    "name", ["kalman", "tcubature.filters.Missing", "no.such.Filter"]
)
def test_filter_class_unknown(name):
    with pytest.raises(ConfigError) as exc_info:
        filter_class(name)

    assert exc_info.value.key == "cls"
