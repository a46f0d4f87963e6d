import math
import typing as t

import numpy as np

from ..exceptions import DomainError
from ..filters import NoiseSpec, SystemModel
from . import PlatformConfig, ScenarioConfig, TargetConfig

KNOT_KM_PER_H = 1.852


def knots_to_km_per_min(v: float) -> float:
    """Convert a speed in knots to km/min."""
    if not v >= 0:
        raise DomainError("v", v, "v >= 0")
    return v * KNOT_KM_PER_H / 60.0


def course_vector(course_deg: float) -> np.ndarray:
    """Unit vector of a compass course, clockwise from north (+y)."""
    theta = math.radians(course_deg)
    return np.array([math.sin(theta), math.cos(theta)])


def build_cwna_model(dt: float) -> t.Tuple[np.ndarray, np.ndarray]:
    """Transition and noise gain of the constant velocity model.

    The state is ``[x, y, vx, vy]``; each axis is driven by a white
    acceleration through ``[dt^2 / 2, dt]``.

    :raises DomainError: ``dt <= 0``.

    """
    if not dt > 0:
        raise DomainError("dt", dt, "dt > 0")

    eye = np.eye(2)
    f = np.block([[eye, dt * eye], [np.zeros((2, 2)), eye]])
    g = np.vstack([0.5 * dt**2 * eye, dt * eye])

    return f, g


def initial_target_state(target: TargetConfig) -> np.ndarray:
    speed = knots_to_km_per_min(target.speed_knots)
    velocity = speed * course_vector(target.course_deg)
    return np.concatenate([np.asarray(target.position, dtype=float), velocity])


def platform_position(
    k: int,
    platform: PlatformConfig,
    dt: float = 1.0,
) -> np.ndarray:
    """Platform position in km at step ``k``.

    Leg ``j -> j + 1`` is flown at the initial course while
    ``j < manoeuvre_step`` and at the final course after.

    """
    if not k >= 0:
        raise DomainError("k", k, "k >= 0")

    leg = knots_to_km_per_min(platform.speed_knots) * dt
    before = min(k, platform.manoeuvre_step)
    after = max(k - platform.manoeuvre_step, 0)

    return (
        np.asarray(platform.position, dtype=float)
        + before * leg * course_vector(platform.course_deg)
        + after * leg * course_vector(platform.final_course_deg)
    )


def bearing(states: np.ndarray, origin: np.ndarray) -> np.ndarray:
    """Full-circle bearing of each state from ``origin``.

    Measured with the two-argument arctangent of ``(dy, dx)``; ``origin``
    is one position or one position per state.

    """
    states = np.asarray(states, dtype=float)
    origin = np.asarray(origin, dtype=float)
    return np.arctan2(
        states[..., 1] - origin[..., 1],
        states[..., 0] - origin[..., 0],
    )


def wrap_angle(a):
    """Wrap angles to ``(-pi, pi]``."""
    return math.pi - np.mod(math.pi - np.asarray(a, dtype=float), 2 * math.pi)


def angle_residual(z, z_pred) -> np.ndarray:
    return wrap_angle(np.asarray(z) - np.asarray(z_pred))


class BearingsOnlyModel:
    """The benchmark's motion and bearing models.

    :param cfg: The scenario.

    """

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg

        self.F, self.G = build_cwna_model(cfg.dt)

        self.Q = self.G @ cfg.sigma_w_matrix @ self.G.T
        """Process noise in state space, ``G sigma_w G^T`` (singular)."""

        self.R = np.array([[float(cfg.sigma_v)]])

        self.platform = np.stack(
            [
                platform_position(k, cfg.platform, cfg.dt)
                for k in range(cfg.steps + 1)
            ]
        )
        """Platform positions for steps ``0 .. T``."""

    def transition(self, x: np.ndarray) -> np.ndarray:
        return x @ self.F.T

    def system(self, k: int) -> SystemModel:
        """The system model for measurement step ``k``."""
        origin = self.platform[k]

        def h(x):
            return bearing(x, origin)

        return SystemModel(
            self.transition, h, residual=angle_residual, vectorized=True
        )

    def q_spec(self) -> NoiseSpec:
        return NoiseSpec(self.Q, self.cfg.dof.nu1)

    def r_spec(self) -> NoiseSpec:
        return NoiseSpec(self.R, self.cfg.dof.nu2)
