import typing as t

from ..core import RngStream
from . import (
    Filter,
    GaussianEstimate,
    MeasurementUpdateReport,
    NoiseSpec,
    StateEstimate,
    SystemModel,
    measurement_update,
    time_update,
    validate_estimate,
)


class SIF(Filter):
    """Stochastic integration filter.

    Assumes Gaussian densities throughout: noise scale matrices are read as
    covariances and their degrees of freedom are ignored.

    """

    name = "sif"

    rule_name = "sir"

    gaussian = True

    default_samples = 100

    scenario_samples = True

    def initial_estimate(self, mean, p0, nu: float = 5.0) -> GaussianEstimate:
        return validate_estimate(GaussianEstimate(mean, p0))

    def step(
        self,
        state: StateEstimate,
        z,
        model: SystemModel,
        q_spec: NoiseSpec,
        r_spec: NoiseSpec,
        rng: t.Optional[RngStream] = None,
    ) -> t.Tuple[GaussianEstimate, MeasurementUpdateReport]:
        if not isinstance(state, GaussianEstimate):
            state = GaussianEstimate(state.mean, state.scale)

        q_cov = NoiseSpec.gaussian(q_spec.scale)
        r_cov = NoiseSpec.gaussian(r_spec.scale)

        pred = time_update(
            state, model.f, q_cov, self.rule, rng, self.shared_points
        )

        return measurement_update(
            pred,
            z,
            model.h,
            model.residual,
            r_cov,
            self.rule,
            rng,
            shared_points=self.shared_points,
            sender=self,
        )


def sif_step(
    state: GaussianEstimate,
    z,
    model: SystemModel,
    q_cov,
    r_cov,
    n_samples: int,
    rng: RngStream,
) -> GaussianEstimate:
    """One Gaussian time and measurement update with the SIR."""
    q_spec = NoiseSpec.gaussian(q_cov)
    r_spec = NoiseSpec.gaussian(r_cov)

    state, _ = SIF(n_samples).step(state, z, model, q_spec, r_spec, rng)
    return state
