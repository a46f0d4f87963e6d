import logging
import math
import typing as t

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..core import RngStream, cholesky_sqrt, student_t_covariance
from ..exceptions import (
    DofTooSmall,
    DomainError,
    NonFiniteIntegrand,
    RuleNotRegistered,
)
from ..signals import on_register_rule, on_unregister_rule


@dataclass(frozen=True)
class StudentTDensity:
    """The Student's t density ``St(x; mean, scale, nu)``.

    ``nu = inf`` denotes the Gaussian ``N(mean, scale)``.

    :param mean: Mean vector, shape ``(n,)``.
    :param scale: Scale matrix, shape ``(n, n)``.
    :param nu: Degrees of freedom.

    """

    mean: np.ndarray
    scale: np.ndarray
    nu: float = math.inf

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float)).reshape(-1)
        scale = np.asarray(self.scale, dtype=float)
        if scale.ndim == 0:
            scale = scale.reshape(1, 1)

        if scale.shape != (mean.shape[0], mean.shape[0]):
            raise DomainError("scale", scale.shape, "shape (n, n)")

        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "nu", float(self.nu))

    @classmethod
    def gaussian(cls, mean, cov):
        return cls(mean, cov, math.inf)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]

    @property
    def is_gaussian(self) -> bool:
        return math.isinf(self.nu)

    @cached_property
    def sqrt(self) -> np.ndarray:
        """Lower Cholesky factor of the scale matrix."""
        return cholesky_sqrt(self.scale, name="scale")

    @property
    def covariance(self) -> np.ndarray:
        return student_t_covariance(self.scale, self.nu)

    def require_dof(self, minimum: float = 2.0):
        """Raise :class:`DofTooSmall` unless ``nu > minimum``."""
        if not self.nu > minimum:
            raise DofTooSmall(self.nu, minimum=minimum)


class Integrand:
    """An integrand ``g: R^n -> R^d`` (or any array shape).

    :param func: The function.
    :param vectorized: ``func`` accepts a ``(k, n)`` batch of points and
        returns a ``(k, ...)`` array. Otherwise it is called once per point.
    :param name: Name used in messages.

    """

    def __init__(
        self,
        func: t.Callable,
        vectorized: bool = False,
        name: t.Optional[str] = None,
    ):
        self.func = func
        self.vectorized = vectorized
        self.name = name or getattr(func, "__name__", "g")

    def __repr__(self):
        return f"Integrand({self.name!r}, vectorized={self.vectorized})"

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at each row of ``points``; returns ``(k, ...)``."""
        points = np.atleast_2d(points)

        if self.vectorized:
            values = np.asarray(self.func(points), dtype=float)
            if values.ndim == 0:
                values = np.full(points.shape[0], float(values))
        else:
            values = np.stack(
                [np.asarray(self.func(p), dtype=float) for p in points]
            )

        return values


def as_integrand(g, vectorized: bool = False) -> Integrand:
    if isinstance(g, Integrand):
        return g
    return Integrand(g, vectorized=vectorized)


def evaluate_integrand(g, points: np.ndarray, rule: t.Optional[str] = None):
    """Evaluate ``g`` at each row of ``points``.

    :raises NonFiniteIntegrand: ``g`` returns non-finite values.

    """
    values = as_integrand(g)(points)
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrand(rule)
    return values


@dataclass
class CubaturePointSet:
    """A weighted set of points realising a discrete integration measure.

    Weights may be negative and sum to one.

    :param points: Points, shape ``(k, n)``.
    :param weights: Weights, shape ``(k,)``.

    """

    points: np.ndarray
    weights: np.ndarray
    samples: int = field(default=1)

    def __len__(self):
        return self.weights.shape[0]

    @property
    def weight_sum(self) -> float:
        return float(np.sum(self.weights))

    def expect(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum of ``values`` (one row per point)."""
        return np.tensordot(self.weights, values, axes=1)

    def evaluate(self, g, rule: t.Optional[str] = None) -> np.ndarray:
        """Evaluate ``g`` at every point.

        :raises NonFiniteIntegrand: ``g`` returns non-finite values.

        """
        return evaluate_integrand(g, self.points, rule=rule)

    def integrate(self, g, rule: t.Optional[str] = None) -> np.ndarray:
        return self.expect(self.evaluate(g, rule=rule))


def symmetric_point_set(
    mean: np.ndarray,
    axes: np.ndarray,
    centre_weight: np.ndarray,
    axis_weight: np.ndarray,
) -> CubaturePointSet:
    """Assemble ``{mean; mean -/+ axes}`` for a stack of samples.

    :param axes: Offsets, shape ``(N, n, n)``; column ``i`` of sample ``l``
        is the ``i``-th axis of that sample.
    :param centre_weight: Centre weight per sample, shape ``(N,)``.
    :param axis_weight: Weight of each off-centre point, shape ``(N,)``.

    The ``N`` samples are averaged: the centre appears once with the mean
    centre weight and every other weight is divided by ``N``.

    """
    samples, n = axes.shape[0], axes.shape[-1]

    offsets = np.swapaxes(axes, -1, -2).reshape(samples * n, n)
    each = np.repeat(axis_weight / samples, n)

    points = np.concatenate(
        [mean[np.newaxis, :], mean - offsets, mean + offsets]
    )
    weights = np.concatenate(
        [[np.sum(centre_weight) / samples], each, each]
    )

    return CubaturePointSet(points=points, weights=weights, samples=samples)


def per_sample_estimates(
    g,
    mean: np.ndarray,
    axes: np.ndarray,
    centre_weight: np.ndarray,
    axis_weight: np.ndarray,
    rule: t.Optional[str] = None,
) -> np.ndarray:
    """Evaluate each of a stack of symmetric samples separately.

    Takes the same arguments as :func:`symmetric_point_set` and returns one
    estimate per sample, shape ``(N, ...)``.

    """
    samples, n = axes.shape[0], axes.shape[-1]

    offsets = np.swapaxes(axes, -1, -2)
    centre = np.broadcast_to(mean, (samples, 1, n))
    points = np.concatenate([centre, mean - offsets, mean + offsets], axis=1)

    values = evaluate_integrand(g, points.reshape(-1, n), rule=rule)
    values = values.reshape(samples, 2 * n + 1, *values.shape[1:])

    weights = np.concatenate(
        [
            centre_weight[:, np.newaxis],
            np.repeat(axis_weight[:, np.newaxis], 2 * n, axis=1),
        ],
        axis=1,
    )

    return np.einsum("sk,sk...->s...", weights, values)


class IntegrationRule:
    """Base class for all integration rules.

    A rule approximates ``I[g] = E[g(x)]`` for ``x`` following a
    :class:`StudentTDensity` by a weighted sum over a
    :class:`CubaturePointSet`.

    :param n_samples: Number of independent rule samples ``N`` averaged by
        stochastic rules.

    """

    name: str

    student_t: bool = True
    """Whether the rule weights against a Student's t density."""

    stochastic: bool = False
    """Whether the rule consumes randomness."""

    min_dof: float = 2.0

    def __init__(self, n_samples: int = 1):
        if int(n_samples) < 1:
            raise DomainError("n_samples", n_samples, "n_samples >= 1")

        self.n_samples = int(n_samples)

        self.logger = logging.getLogger(__name__)

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}(n_samples={self.n_samples})"

    def check_density(self, density: StudentTDensity):
        if self.student_t:
            density.require_dof(self.min_dof)

    def point_set(
        self,
        density: StudentTDensity,
        rng: t.Optional[RngStream] = None,
    ) -> CubaturePointSet:
        """Realise the rule as one weighted point set.

        Developers MUST implement this method.

        :raises DofTooSmall: ``density`` has too few degrees of freedom.

        """
        raise NotImplementedError()

    def _require_rng(self, rng):
        if self.stochastic and rng is None:
            raise ValueError(f"Rule '{self.name}' needs a random stream")

    def integrate(
        self,
        g,
        density: StudentTDensity,
        rng: t.Optional[RngStream] = None,
    ) -> np.ndarray:
        """Approximate ``E[g(x)]`` under ``density``.

        :raises NonFiniteIntegrand: ``g`` returns non-finite values.

        """
        points = self.point_set(density, rng)
        return points.integrate(g, rule=self.name)

    def sample_estimates(
        self,
        g,
        density: StudentTDensity,
        rng: t.Optional[RngStream] = None,
        count: int = 1,
    ) -> np.ndarray:
        """Return ``count`` independent estimates, each from ``N`` samples.

        Used to attach a standard error to a stochastic estimate.

        """
        return np.stack(
            [self.integrate(g, density, rng) for _ in range(count)]
        )


class RuleRegistry:
    """Registry of integration rule classes by name."""

    def __init__(self):
        self.rules: t.Dict[str, t.Type[IntegrationRule]] = {}
        """Registered integration rule classes."""

        self.logger = logging.getLogger(__name__)

    def __contains__(self, name):
        return name in self.rules

    def __iter__(self):
        return iter(self.rules)

    def create(self, name: str, *args, **kwargs) -> IntegrationRule:
        r"""Initialise the rule registered as ``name``.

        :param \*args: Positional arguments for the rule.
        :param \*\*kwargs: Keyword-arguments for the rule.

        :raises RuleNotRegistered: No rule named ``name``.

        """
        return self.get(name)(*args, **kwargs)

    def ensure_rule(self, name: t.Optional[str] = None):
        """Ensure a rule (or at least one rule) is registered.

        :raises RuleNotRegistered: No rule or no rule with ``name``.

        """
        if name:
            self.get(name)
        elif not self.rules:
            raise RuleNotRegistered()

    def get(self, name: str) -> t.Type[IntegrationRule]:
        try:
            return self.rules[name]
        except KeyError:
            raise RuleNotRegistered(name)

    def register(self, rule_cls, name=None, overwrite=False):
        """Register a rule class.

        :param rule_cls: The rule class.
        :param name: Name to use, defaults to ``name`` of the rule.
        :param overwrite: Overwrite an existing rule with ``name``, defaults
                          to ``False``.

        """
        if not name:
            name = rule_cls.name
        if name in self.rules and not overwrite:
            raise KeyError(f"Rule '{name}' already exists")

        self.rules[name] = rule_cls

        on_register_rule.send(self, rule=rule_cls)

        self.logger.info("Registered a rule: %s", name)

        return rule_cls

    def unregister(self, name: str, ignore_missing: bool = False):
        """Unregister a rule.

        :param name: The rule name to unregister.
        :param ignore_missing: Do not raise an exception if the rule does
                               not exist, defaults to ``False``.

        """
        try:
            rule_cls = self.rules.pop(name)
        except KeyError:
            if ignore_missing:
                return
            raise RuleNotRegistered(name)

        on_unregister_rule.send(self, rule=rule_cls)

        self.logger.info("Unregistered a rule: %s", name)


registry = RuleRegistry()


def _register_defaults():
    from .deterministic import STSRCR
    from .montecarlo import MonteCarlo
    from .sir import SIR
    from .stochastic import SSTSRCR

    for rule_cls in (SSTSRCR, STSRCR, SIR, MonteCarlo):
        registry.register(rule_cls)


_register_defaults()
