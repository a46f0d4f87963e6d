import typing as t

from dataclasses import dataclass, field

import numpy as np

from ..core import RngStream, as_matrix, sample_multivariate_normal
from ..exceptions import DomainError
from . import ScenarioConfig
from .model import BearingsOnlyModel, bearing, initial_target_state


def sample_contaminated_noise(
    rng: RngStream,
    sigma,
    p: float,
    inflation: float,
    size: t.Optional[int] = None,
    return_outliers: bool = False,
):
    """Draw outlier-contaminated Gaussian noise.

    Each draw comes from ``N(0, sigma)`` with probability ``1 - p`` and from
    ``N(0, inflation * sigma)`` with probability ``p``.

    :param return_outliers: Also return which draws used the inflated
        component.

    :raises DomainError: ``p`` not in ``[0, 1]``.

    """
    if not 0.0 <= p <= 1.0:
        raise DomainError("p", p, "0 <= p <= 1")

    sigma = as_matrix(sigma, name="sigma")
    n = sigma.shape[0]

    outliers = rng.generator.random(size) < p

    # a singular sigma (e.g. a zero-noise scenario) has no Cholesky factor
    w, v = np.linalg.eigh(0.5 * (sigma + sigma.T))
    root = v * np.sqrt(np.clip(w, 0.0, None))

    noise = sample_multivariate_normal(
        rng, np.zeros(n), sigma, size, chol=root
    )
    gain = np.where(outliers, np.sqrt(inflation), 1.0)
    noise = noise * gain[..., np.newaxis]

    if return_outliers:
        return noise, outliers
    return noise


@dataclass
class RunRecord:
    """One Monte Carlo run.

    ``truth`` and ``measurements`` hold steps ``1 .. T``; ``initial`` is the
    true state at step 0.

    """

    run: int
    initial: np.ndarray
    truth: np.ndarray
    measurements: np.ndarray

    estimates: t.Dict[str, np.ndarray] = field(default_factory=dict)
    """Per-filter estimates, shape ``(T, 4)``; ``nan`` after divergence."""

    step_times: t.Dict[str, np.ndarray] = field(default_factory=dict)
    """Per-filter wall time of each step, seconds."""

    diverged: t.Dict[str, t.Optional[int]] = field(default_factory=dict)
    """Per-filter step of divergence, or ``None``."""

    @property
    def steps(self) -> int:
        return self.truth.shape[0]


def simulate_truth(
    rng: RngStream,
    cfg: ScenarioConfig,
    model: t.Optional[BearingsOnlyModel] = None,
    run: int = 0,
) -> RunRecord:
    """Simulate the target track and the noisy bearings."""
    if model is None:
        model = BearingsOnlyModel(cfg)

    steps, mix = cfg.steps, cfg.contamination

    w = sample_contaminated_noise(
        rng, cfg.sigma_w_matrix, mix.p_w, mix.inflation_w, size=steps
    )
    v = sample_contaminated_noise(
        rng, cfg.sigma_v, mix.p_v, mix.inflation_v, size=steps
    )[:, 0]

    initial = initial_target_state(cfg.target)

    truth = np.empty((steps, 4))
    x = initial
    for k in range(steps):
        x = model.F @ x + model.G @ w[k]
        truth[k] = x

    measurements = bearing(truth, model.platform[1:]) + v

    return RunRecord(
        run=run,
        initial=initial,
        truth=truth,
        measurements=measurements,
    )
