"""Recursive Student's t filters.

Every filter here propagates a Student's t density with fixed degrees of
freedom ``nu``: a time update through ``f`` with Student's t process noise
and a measurement update whose posterior scale matrix is inflated or
deflated by the squared Mahalanobis norm of the residual. The filters only
differ in the integration rule they evaluate the moment integrals with.

"""
import typing as t

from ..core import RngStream
from . import (
    Filter,
    MeasurementUpdateReport,
    NoiseSpec,
    StateEstimate,
    SystemModel,
    measurement_update,
    require_student_t_rule,
    time_update,
    validate_estimate,
)


class StudentTFilter(Filter):
    """A recursive Student's t filter over any Student's t rule.

    :raises ConfigError: The rule does not weight against a Student's t
        density.

    """

    name = "rstnf"

    rule_name = "sstsrcr"

    def __init__(self, n_samples: t.Optional[int] = None, **kwargs):
        super().__init__(n_samples=n_samples, **kwargs)

        require_student_t_rule(self.rule)

    def initial_estimate(self, mean, p0, nu: float = 5.0) -> StateEstimate:
        # P0 is used directly as the prior scale matrix
        return validate_estimate(StateEstimate(mean, p0, nu))

    def step(
        self,
        state: StateEstimate,
        z,
        model: SystemModel,
        q_spec: NoiseSpec,
        r_spec: NoiseSpec,
        rng: t.Optional[RngStream] = None,
    ) -> t.Tuple[StateEstimate, MeasurementUpdateReport]:
        pred = time_update(
            state, model.f, q_spec, self.rule, rng, self.shared_points
        )

        return measurement_update(
            pred,
            z,
            model.h,
            model.residual,
            r_spec,
            self.rule,
            rng,
            shared_points=self.shared_points,
            sender=self,
        )


class RSTSCF(StudentTFilter):
    """Student's t filter on the stochastic spherical-radial rule."""

    name = "rstscf"

    rule_name = "sstsrcr"

    default_samples = 100

    scenario_samples = True


class RSTCF(StudentTFilter):
    """Student's t filter on the deterministic third-degree rule."""

    name = "rstcf_det"

    rule_name = "stsrcr"


class RSTMCF(StudentTFilter):
    """Student's t filter on plain Monte Carlo integration."""

    name = "rstmcf"

    rule_name = "mc"

    default_samples = 10000


def rstscf_step(
    state: StateEstimate,
    z,
    model: SystemModel,
    q_spec: NoiseSpec,
    r_spec: NoiseSpec,
    n_samples: int,
    rng: RngStream,
) -> StateEstimate:
    """One time and measurement update with ``n_samples`` rule samples."""
    state, _ = RSTSCF(n_samples).step(state, z, model, q_spec, r_spec, rng)
    return state
