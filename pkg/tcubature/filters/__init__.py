import dataclasses
import logging
import math
import time
import typing as t

from dataclasses import dataclass

import numpy as np

from ..core import (
    RngStream,
    as_matrix,
    cho_solve_lower,
    cholesky_sqrt,
    is_positive_semidefinite,
    solve_lower,
    symmetrize,
)
from ..exceptions import (
    ConfigError,
    DofTooSmall,
    FilterNotRegistered,
    InnovationCovarianceNotPD,
    NotPositiveDefinite,
    TcubatureException,
)
from ..rules import (
    CubaturePointSet,
    Integrand,
    IntegrationRule,
    StudentTDensity,
    as_integrand,
    registry,
)
from ..signals import (
    on_jitter_applied,
    on_register_filter,
    on_unregister_filter,
)

logger = logging.getLogger(__name__)

JITTER_SCALE = 1e-9


@dataclass(frozen=True)
class StateEstimate:
    """A filtering or predicted density ``St(x; mean, scale, nu)``.

    :param mean: State mean ``x``, shape ``(n,)``.
    :param scale: Scale matrix ``P``, shape ``(n, n)``.
    :param nu: Degrees of freedom, held fixed over time.

    """

    mean: np.ndarray
    scale: np.ndarray
    nu: float = 5.0

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float)).reshape(-1)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", as_matrix(self.scale, name="P"))
        object.__setattr__(self, "nu", float(self.nu))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def density(self) -> StudentTDensity:
        return StudentTDensity(self.mean, self.scale, self.nu)

    @property
    def covariance(self) -> np.ndarray:
        return self.density.covariance

    def replace(self, **changes) -> "StateEstimate":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class GaussianEstimate(StateEstimate):
    """A Gaussian estimate; ``scale`` is the covariance."""

    nu: float = math.inf


@dataclass(frozen=True)
class NoiseSpec:
    """Additive noise ``St(0, scale, dof)``; ``dof = inf`` is Gaussian.

    The scale may be singular (e.g. process noise driven through a
    lower-dimensional input matrix) but must be positive semidefinite.

    :raises NotPositiveDefinite: ``scale`` is not positive semidefinite.
    :raises DofTooSmall: ``dof <= 2``.

    """

    scale: np.ndarray
    dof: float = math.inf

    def __post_init__(self):
        scale = as_matrix(self.scale, name="noise scale")
        if not is_positive_semidefinite(scale):
            raise NotPositiveDefinite(scale, name="noise scale")
        if not self.dof > 2:
            raise DofTooSmall(self.dof)

        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "dof", float(self.dof))

    @classmethod
    def gaussian(cls, cov):
        return cls(cov, math.inf)


def subtract(z: np.ndarray, z_pred: np.ndarray) -> np.ndarray:
    return z - z_pred


class SystemModel:
    """Process and measurement functions of a state-space model.

    :param f: State transition ``R^n -> R^n``.
    :param h: Measurement function ``R^n -> R^m``.
    :param residual: ``(z, z_pred) -> R^m``; defaults to subtraction.
    :param vectorized: ``f`` and ``h`` accept a ``(k, n)`` batch of states.

    """

    def __init__(
        self,
        f: t.Callable,
        h: t.Callable,
        residual: t.Optional[t.Callable] = None,
        vectorized: bool = False,
    ):
        self.f = Integrand(f, vectorized=vectorized, name="f")
        self.h = Integrand(h, vectorized=vectorized, name="h")
        self.residual = residual or subtract

    def transition(self, x) -> np.ndarray:
        return self.f(np.atleast_2d(x))[0]

    def measure(self, x) -> np.ndarray:
        return np.atleast_1d(self.h(np.atleast_2d(x))[0])


@dataclass
class MeasurementUpdateReport:
    """Intermediate quantities of one measurement update.

    ``delta2`` is the squared Mahalanobis norm of the residual against
    ``pzz``; ``jitter`` is the diagonal load added to ``pzz``, if any.

    """

    z_pred: np.ndarray
    pzz: np.ndarray
    pxz: np.ndarray
    gain: np.ndarray
    innovation: np.ndarray
    delta2: float
    jitter: float = 0.0


def dof_ratio(nu: float) -> float:
    """``(nu - 2) / nu``, the scale-per-covariance factor; 1 when Gaussian."""
    if math.isinf(nu):
        return 1.0
    return (nu - 2.0) / nu


def noise_coefficient(nu_state: float, nu_noise: float) -> float:
    """Weight of a noise scale matrix in a predicted scale matrix."""
    return dof_ratio(nu_state) / dof_ratio(nu_noise)


def posterior_factor(nu: float, delta2: float, m: int) -> float:
    """``(nu - 2)(nu + delta2) / (nu (nu + m - 2))``; 1 when Gaussian."""
    if math.isinf(nu):
        return 1.0
    return (nu - 2.0) * (nu + delta2) / (nu * (nu + m - 2.0))


def validate_estimate(state: StateEstimate) -> StateEstimate:
    """Symmetrize the scale matrix and check it is positive definite.

    :raises NotPositiveDefinite: ``state.scale`` fails Cholesky.
    :raises DofTooSmall: ``state.nu <= 2``.

    """
    if not state.nu > 2:
        raise DofTooSmall(state.nu)

    scale = symmetrize(state.scale)
    cholesky_sqrt(scale, name="P")

    return state.replace(scale=scale)


def weighted_moments(
    points: CubaturePointSet,
    values: np.ndarray,
) -> t.Tuple[np.ndarray, np.ndarray]:
    """Weighted mean and centred second moment of ``values``."""
    mean = points.expect(values)
    dev = values - mean
    spread = (points.weights[:, np.newaxis] * dev).T @ dev
    return mean, symmetrize(spread)


def weighted_cross(
    points: CubaturePointSet,
    x_mean: np.ndarray,
    values: np.ndarray,
    values_mean: np.ndarray,
) -> np.ndarray:
    dx = points.points - x_mean
    dz = values - values_mean
    return (points.weights[:, np.newaxis] * dx).T @ dz


def _outer(g: Integrand) -> Integrand:
    def outer(points):
        values = g(points).reshape(points.shape[0], -1)
        return np.einsum("ki,kj->kij", values, values)

    return Integrand(outer, vectorized=True, name=f"{g.name} {g.name}^T")


def unwrap_around(h: Integrand, residual: t.Callable, ref) -> Integrand:
    """``h`` mapped onto the branch of ``ref``, ``ref + residual(h, ref)``.

    Keeps measurement moments of wrapped quantities (angles) from being
    averaged across a branch cut.

    """
    ref = np.atleast_1d(np.asarray(ref, dtype=float))

    def unwrapped(x):
        values = h(x).reshape(x.shape[0], -1)
        return ref + np.asarray(residual(values, ref)).reshape(values.shape)

    return Integrand(unwrapped, vectorized=True, name=h.name)


def factor_innovation(pzz: np.ndarray, sender=None):
    """Cholesky-factor ``pzz``, diagonal loading it once if needed.

    :return: ``(pzz, chol, jitter)`` with the possibly loaded ``pzz``.

    :raises InnovationCovarianceNotPD: ``pzz`` fails even after loading.

    """
    try:
        return pzz, cholesky_sqrt(pzz, name="Pzz"), 0.0
    except NotPositiveDefinite:
        pass

    m = pzz.shape[0]
    jitter = JITTER_SCALE * float(np.trace(pzz)) / m
    if not (math.isfinite(jitter) and jitter > 0):
        raise InnovationCovarianceNotPD(pzz, jitter=jitter)

    loaded = pzz + jitter * np.eye(m)
    try:
        chol = cholesky_sqrt(loaded, name="Pzz")
    except NotPositiveDefinite:
        raise InnovationCovarianceNotPD(pzz, jitter=jitter)

    on_jitter_applied.send(sender, jitter=jitter)

    logger.debug("Added jitter %.3g to the innovation scale matrix", jitter)

    return loaded, chol, jitter


class Filter:
    """Base class for all filters.

    A filter owns an integration rule and advances a state estimate by one
    time and one measurement update per step.

    :param n_samples: Rule sample count ``N``.
    :param shared_points: Assemble every integral of an update from one
        point set (default); otherwise draw a point set per integral.
    :param rule: Registered rule name, defaults to ``rule_name``.

    """

    name: str

    rule_name: str

    gaussian: bool = False
    """Whether the filter assumes Gaussian densities."""

    default_samples: int = 1

    scenario_samples: bool = False
    """Whether an experiment's sample count ``N`` applies to this filter."""

    def __init__(
        self,
        n_samples: t.Optional[int] = None,
        shared_points: bool = True,
        rule: t.Optional[str] = None,
        **rule_options,
    ):
        if n_samples is None:
            n_samples = self.default_samples
        self.rule: IntegrationRule = registry.create(
            rule or self.rule_name, n_samples=n_samples, **rule_options
        )

        self.shared_points = shared_points

        self.logger = logging.getLogger(__name__)

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}({self.rule!r}, shared_points={self.shared_points})"

    def initial_estimate(self, mean, p0, nu: float) -> StateEstimate:
        """Wrap a prior mean and ``P0`` as this filter's state type."""
        raise NotImplementedError()

    def step(
        self,
        state: StateEstimate,
        z,
        model: SystemModel,
        q_spec: NoiseSpec,
        r_spec: NoiseSpec,
        rng: t.Optional[RngStream] = None,
    ) -> t.Tuple[StateEstimate, MeasurementUpdateReport]:
        """Advance ``state`` by one time step and one measurement.

        Developers MUST implement this method.

        """
        raise NotImplementedError()


def time_update(
    state: StateEstimate,
    f,
    q_spec: NoiseSpec,
    rule: IntegrationRule,
    rng: t.Optional[RngStream] = None,
    shared_points: bool = True,
) -> StateEstimate:
    """Predict ``state`` through ``f`` and add process noise.

    :raises DofTooSmall: A dof is too small for the rule.
    :raises NotPositiveDefinite: The predicted scale matrix is not positive
        definite.

    """
    f = as_integrand(f)
    density = state.density

    if shared_points:
        points = rule.point_set(density, rng)
        mean, spread = weighted_moments(points, points.evaluate(f, rule.name))
    else:
        mean = rule.integrate(f, density, rng)
        second = rule.integrate(_outer(f), density, rng)
        spread = symmetrize(second - np.outer(mean, mean))

    scale = (
        dof_ratio(state.nu) * spread
        + noise_coefficient(state.nu, q_spec.dof) * q_spec.scale
    )

    return validate_estimate(state.replace(mean=mean, scale=scale))


def measurement_update(
    pred: StateEstimate,
    z,
    h,
    residual: t.Optional[t.Callable],
    r_spec: NoiseSpec,
    rule: IntegrationRule,
    rng: t.Optional[RngStream] = None,
    shared_points: bool = True,
    sender=None,
) -> t.Tuple[StateEstimate, MeasurementUpdateReport]:
    """Correct ``pred`` with the measurement ``z``.

    :raises InnovationCovarianceNotPD: ``Pzz`` cannot be factorised.
    :raises NotPositiveDefinite: The posterior scale matrix is not positive
        definite.

    """
    h = as_integrand(h)
    residual = residual or subtract
    density = pred.density
    z = np.atleast_1d(np.asarray(z, dtype=float))

    if residual is not subtract:
        ref = h(pred.mean[np.newaxis]).reshape(-1)
        h = unwrap_around(h, residual, ref)

    if shared_points:
        points = rule.point_set(density, rng)
        values = points.evaluate(h, rule.name).reshape(len(points), -1)
        z_pred, spread = weighted_moments(points, values)
        cross = weighted_cross(points, pred.mean, values, z_pred)
    else:
        z_pred = np.atleast_1d(rule.integrate(h, density, rng))
        second = np.atleast_2d(rule.integrate(_outer(h), density, rng))
        spread = symmetrize(second - np.outer(z_pred, z_pred))

        def state_outer(x):
            return np.einsum("ki,kj->kij", x, h(x).reshape(x.shape[0], -1))

        joint = rule.integrate(
            Integrand(state_outer, vectorized=True), density, rng
        )
        cross = joint - np.outer(pred.mean, z_pred)

    m = z_pred.shape[0]
    c = dof_ratio(pred.nu)

    noise = noise_coefficient(pred.nu, r_spec.dof) * r_spec.scale
    pzz = symmetrize(c * spread + noise)
    pxz = c * cross

    pzz, chol, jitter = factor_innovation(pzz, sender=sender)

    innovation = np.atleast_1d(residual(z, z_pred))
    whitened = solve_lower(chol, innovation)
    delta2 = float(whitened @ whitened)

    gain = cho_solve_lower(chol, pxz.T).T

    mean = pred.mean + gain @ innovation
    factor = posterior_factor(pred.nu, delta2, m)
    scale = factor * (pred.scale - gain @ pzz @ gain.T)

    report = MeasurementUpdateReport(
        z_pred=z_pred,
        pzz=pzz,
        pxz=pxz,
        gain=gain,
        innovation=innovation,
        delta2=delta2,
        jitter=jitter,
    )

    return validate_estimate(pred.replace(mean=mean, scale=scale)), report


class StepOutcome(t.NamedTuple):
    state: StateEstimate
    seconds: float
    error: t.Optional[t.Union[Exception, str]] = None


class FilterBank:
    """Runs several filters side by side on one measurement sequence."""

    def __init__(self):
        self.filters: t.Dict[str, Filter] = {}
        """Registered filters."""

        self.logger = logging.getLogger(__name__)

    def __contains__(self, name):
        return name in self.filters

    def __iter__(self):
        return iter(self.filters)

    def __len__(self):
        return len(self.filters)

    def ensure_filter(self, name: t.Optional[str] = None):
        """Ensure a filter (or at least one filter) is registered.

        :raises FilterNotRegistered: No filter or no filter with ``name``.

        """
        if name:
            self.get(name)
        elif not self.filters:
            raise FilterNotRegistered()

    def get(self, name: str) -> Filter:
        try:
            return self.filters[name]
        except KeyError:
            raise FilterNotRegistered(name)

    def register(
        self, filter_cls, *args, name=None, overwrite=False, **kwargs
    ):
        r"""Register a filter.

        :param filter_cls: The filter class to register and initialise, or
                           an initialised filter.
        :param \*args: Positional arguments for the filter.
        :param name: Name to use, defaults to ``name`` of the filter.
        :param overwrite: Overwrite an existing filter with ``name``, defaults
                          to ``False``.
        :param \*\*kwargs: Keyword-arguments for the filter.

        """
        if not name:
            name = filter_cls.name
        if name in self.filters and not overwrite:
            raise KeyError(f"Filter '{name}' already exists")

        if isinstance(filter_cls, Filter):
            filter_ = filter_cls
        else:
            filter_ = filter_cls(*args, **kwargs)

        self.filters[name] = filter_

        on_register_filter.send(self, filter=filter_)

        self.logger.info("Registered a filter: %s", name)

        return filter_

    def unregister(self, name: str, ignore_missing: bool = False):
        """Unregister a filter.

        :param name: The filter name to unregister.
        :param ignore_missing: Do not raise an exception if the filter does
                               not exist, defaults to ``False``.

        """
        try:
            filter_ = self.filters.pop(name)
        except KeyError:
            if ignore_missing:
                return
            raise FilterNotRegistered(name)

        on_unregister_filter.send(self, filter=filter_)

        self.logger.info("Unregistered a filter: %s", name)

    def initial_estimates(self, mean, p0, nu: float):
        return {
            name: filter_.initial_estimate(mean, p0, nu)
            for name, filter_ in self.filters.items()
        }

    def step(
        self,
        states: t.Dict[str, StateEstimate],
        z,
        model: SystemModel,
        q_spec: NoiseSpec,
        r_spec: NoiseSpec,
        streams: t.Mapping[str, RngStream],
    ) -> t.Dict[str, StepOutcome]:
        """Step the filter of every entry in ``states`` and time it.

        A filter whose step raises a numerical error or returns a
        non-finite mean is reported with ``error`` set; it does not stop
        the other filters.

        """
        rv = {}
        for name, state in states.items():
            filter_ = self.get(name)

            start = time.perf_counter()
            error: t.Optional[t.Union[Exception, str]] = None
            try:
                state, _ = filter_.step(
                    state, z, model, q_spec, r_spec, streams.get(name)
                )
            except (TcubatureException, FloatingPointError) as exc:
                error = exc
            else:
                if not np.all(np.isfinite(state.mean)):
                    error = "non-finite estimate"
            seconds = time.perf_counter() - start

            rv[name] = StepOutcome(state, seconds, error)

        return rv


def require_student_t_rule(rule: IntegrationRule):
    if not rule.student_t:
        raise ConfigError("rule", f"'{rule.name}' is not a Student's t rule")


def _default_filters():
    from .gaussian import SIF
    from .student_t import RSTCF, RSTMCF, RSTSCF

    return {cls.name: cls for cls in (RSTSCF, SIF, RSTCF, RSTMCF)}


FILTERS: t.Dict[str, t.Type[Filter]] = {}


def filter_class(name: str) -> t.Type[Filter]:
    """Resolve a registered short name or a dotted path to a filter class.

    :raises ConfigError: ``name`` resolves to nothing.

    """
    if not FILTERS:
        FILTERS.update(_default_filters())

    if name in FILTERS:
        return FILTERS[name]

    if "." not in name:
        raise ConfigError("cls", f"unknown filter '{name}'")

    from ..utils import import_class

    try:
        return import_class(name)
    except (ImportError, AttributeError) as exc:
        raise ConfigError("cls", f"cannot import '{name}': {exc}")
