"""The manoeuvring bearings-only tracking benchmark.

A target on a straight course is observed by an angle sensor on a platform
that turns once. Process and measurement noise are Gaussian mixtures with
a rare inflated component, so both are heavy tailed.

"""
import math
import typing as t

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ConfigError


@dataclass
class Contamination:
    """Outlier mixture: inflate the nominal covariance w.p. ``p``."""

    p_w: float = 0.05
    inflation_w: float = 100.0
    p_v: float = 0.05
    inflation_v: float = 50.0

    def validate(self):
        for key in ("p_w", "p_v"):
            value = getattr(self, key)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"contamination.{key}", "must be in [0, 1]")
        for key in ("inflation_w", "inflation_v"):
            value = getattr(self, key)
            if not value >= 1.0:
                raise ConfigError(f"contamination.{key}", "must be >= 1")


@dataclass
class TargetConfig:
    position: t.Tuple[float, float] = (3.0, 3.0)
    speed_knots: float = 180.0
    course_deg: float = -135.4

    def validate(self):
        if len(self.position) != 2:
            raise ConfigError("target.position", "must be (x, y) in km")
        if not self.speed_knots >= 0:
            raise ConfigError("target.speed_knots", "must be >= 0")


@dataclass
class PlatformConfig:
    """A platform on two straight legs joined by an instant turn."""

    position: t.Tuple[float, float] = (0.0, 0.0)
    speed_knots: float = 50.0
    course_deg: float = -80.0
    final_course_deg: float = 146.0
    manoeuvre_step: int = 15

    def validate(self):
        if len(self.position) != 2:
            raise ConfigError("platform.position", "must be (x, y) in km")
        if not self.speed_knots >= 0:
            raise ConfigError("platform.speed_knots", "must be >= 0")
        if not self.manoeuvre_step >= 0:
            raise ConfigError("platform.manoeuvre_step", "must be >= 0")


@dataclass
class PriorConfig:
    """The prior ``P0``, as a diagonal or a full matrix.

    The initial estimate of each run is drawn from ``N(x0, P0)``; ``P0`` is
    also the initial scale matrix of every filter.

    """

    p0: t.Sequence = (16.0, 16.0, 4.0, 4.0)

    @property
    def matrix(self) -> np.ndarray:
        p0 = np.asarray(self.p0, dtype=float)
        return np.diag(p0) if p0.ndim == 1 else p0

    def validate(self):
        matrix = self.matrix
        if matrix.shape != (4, 4):
            raise ConfigError("prior.p0", "must be 4 diagonal entries or 4x4")
        if not np.all(np.linalg.eigvalsh(0.5 * (matrix + matrix.T)) > 0):
            raise ConfigError("prior.p0", "must be positive definite")


@dataclass
class DofConfig:
    """Degrees of freedom of process noise, measurement noise and state."""

    nu1: float = 5.0
    nu2: float = 5.0
    nu3: float = 5.0

    def validate(self):
        for key in ("nu1", "nu2", "nu3"):
            if not getattr(self, key) > 2:
                raise ConfigError(f"dof.{key}", "must be > 2")


@dataclass
class ScenarioConfig:
    """Every constant of the bearings-only benchmark.

    :param dt: Sampling interval, minutes.
    :param steps: Number of steps ``T``.
    :param sigma_w: Nominal process noise covariance, km^2/min^2; a scalar
        is read as a multiple of the 2x2 identity.
    :param sigma_v: Nominal bearing noise variance, rad^2.
    :param runs: Monte Carlo runs ``M``.
    :param samples: Rule sample count ``N``.
    :param seed: Master seed.

    """

    dt: float = 1.0
    steps: int = 100
    sigma_w: t.Any = 1e-6
    sigma_v: float = 0.02**2

    contamination: Contamination = field(default_factory=Contamination)
    target: TargetConfig = field(default_factory=TargetConfig)
    platform: PlatformConfig = field(default_factory=PlatformConfig)
    prior: PriorConfig = field(default_factory=PriorConfig)
    dof: DofConfig = field(default_factory=DofConfig)

    runs: int = 1000
    samples: int = 100
    seed: int = 0

    @property
    def sigma_w_matrix(self) -> np.ndarray:
        sigma_w = np.asarray(self.sigma_w, dtype=float)
        if sigma_w.ndim == 0:
            return float(sigma_w) * np.eye(2)
        if sigma_w.ndim == 1:
            return np.diag(sigma_w)
        return sigma_w

    def validate(self) -> "ScenarioConfig":
        """Check every constant.

        :raises ConfigError: naming the first offending key.

        """
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError("scenario.dt", "must be > 0")
        if not self.steps >= 1:
            raise ConfigError("scenario.steps", "must be >= 1")

        sigma_w = self.sigma_w_matrix
        if sigma_w.shape != (2, 2) or not np.all(
            np.linalg.eigvalsh(0.5 * (sigma_w + sigma_w.T)) >= 0
        ):
            raise ConfigError("scenario.sigma_w", "must be a 2x2 covariance")
        if not (math.isfinite(self.sigma_v) and self.sigma_v >= 0):
            raise ConfigError("scenario.sigma_v", "must be >= 0")

        if not self.runs >= 1:
            raise ConfigError("monte_carlo.runs", "must be >= 1")
        if not self.samples >= 1:
            raise ConfigError("monte_carlo.samples", "must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("monte_carlo.seed", "must be in [0, 2**64)")

        for section in (
            self.contamination,
            self.target,
            self.platform,
            self.prior,
            self.dof,
        ):
            section.validate()

        return self
