"""Statistical self-checks of the integration rules.

Each check draws from its own stream of one master seed and reports a
:class:`CheckResult`; :func:`run_checks` runs them all.

"""
import logging
import math
import typing as t

from dataclasses import dataclass

import numpy as np

from scipy import stats

from .core import RngStream
from .exceptions import DofTooSmall
from .rules import Integrand, StudentTDensity, registry
from .rules.diagnostics import (
    LIMIT_DOF,
    gaussian_cos_expectation,
    limit_consistency_check,
    student_t_cos_expectation,
)
from .rules.montecarlo import MonteCarlo
from .rules.sir import SIR
from .rules.stochastic import SSTSRCR, sample_radial_point, sstsrcr_integrate

logger = logging.getLogger(__name__)

EPS = float(np.finfo(float).eps)

NORMALIZATION_CASES = 50
EXACTNESS_CASES = 200
UNBIASED_REPLICATIONS = 10_000
RADIAL_DRAWS = 1_000_000
RADIAL_CASES = ((2, 8.0), (4, 6.0), (3, 10.0))
VARIANCE_REPLICATIONS = 1000
LIMIT_SAMPLES = 10_000

SIGNIFICANCE = 0.01
STANDARD_ERRORS = 4.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: {self.detail}"


def random_spd(rng: RngStream, n: int) -> np.ndarray:
    a = rng.generator.standard_normal((n, n))
    return a @ a.T / n + 0.5 * np.eye(n)


def _random_density(rng: RngStream, nu: t.Optional[float]):
    n = int(rng.generator.integers(1, 6))
    if nu is None:
        nu = float(rng.generator.uniform(4.0, 30.0))

    mean = rng.generator.standard_normal(n)
    return StudentTDensity(mean, random_spd(rng, n), nu)


class CubicPolynomial:
    """``c + b.x + x'Ax + sum T_ijk x_i x_j x_k`` with known moments."""

    def __init__(self, rng: RngStream, n: int):
        normal = rng.generator.standard_normal
        self.c = float(normal())
        self.b = normal(n)
        self.a = normal((n, n))
        self.t = 0.5 * normal((n, n, n))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return (
            self.c
            + x @ self.b
            + np.einsum("ki,ij,kj->k", x, self.a, x)
            + np.einsum("ijl,ki,kj,kl->k", self.t, x, x, x)
        )

    def expectation(self, mean: np.ndarray, cov: np.ndarray) -> float:
        """``E[g(x)]`` from the mean and covariance of a symmetric law.

        Odd central moments of an elliptical density vanish.

        """
        third = (
            np.einsum("i,j,l->ijl", mean, mean, mean)
            + np.einsum("i,jl->ijl", mean, cov)
            + np.einsum("j,il->ijl", mean, cov)
            + np.einsum("l,ij->ijl", mean, cov)
        )
        return float(
            self.c
            + self.b @ mean
            + mean @ self.a @ mean
            + np.sum(self.a * cov)
            + np.sum(self.t * third)
        )


def check_weight_normalization(
    seed: int = 0,
    nu: t.Optional[float] = None,
) -> CheckResult:
    """Every realised point set of every registered rule sums to one."""
    rng = RngStream(seed, 1)

    worst = 0.0
    for name in registry:
        rule_cls = registry.get(name)
        for case in range(NORMALIZATION_CASES):
            case_rng = rng.derive(case)
            density = _random_density(case_rng, nu)
            if not rule_cls.student_t:
                density = StudentTDensity.gaussian(density.mean, density.scale)

            n_samples = int(case_rng.generator.integers(1, 6))
            points = rule_cls(n_samples).point_set(density, case_rng)

            scale = max(1.0, float(np.sum(np.abs(points.weights))))
            error = abs(points.weight_sum - 1.0) / scale
            worst = max(worst, error)

    return CheckResult(
        "weight-normalization",
        worst <= 1e-12,
        f"worst scaled |sum(w) - 1| = {worst:.3g}",
    )


def check_third_degree_exactness(
    seed: int = 0,
    nu: t.Optional[float] = None,
) -> CheckResult:
    """A single stochastic sample integrates random cubics exactly.

    The allowance is ``1e-9`` relative plus the rounding error of the
    weighted sum itself, which dominates when ``nu`` is close to 2.

    """
    rng = RngStream(seed, 2)
    rule = SSTSRCR(1)

    failures, worst = 0, 0.0
    for case in range(EXACTNESS_CASES):
        case_rng = rng.derive(case)
        density = _random_density(case_rng, nu)
        poly = CubicPolynomial(case_rng, density.dim)
        g = Integrand(poly, vectorized=True, name="cubic")

        points = rule.point_set(density, case_rng)
        values = points.evaluate(g, rule=rule.name)
        estimate = float(points.expect(values))

        exact = poly.expectation(density.mean, density.covariance)
        rounding = 1e3 * EPS * float(np.sum(np.abs(points.weights * values)))
        allowed = 1e-9 * max(1.0, abs(exact)) + rounding

        error = abs(estimate - exact)
        worst = max(worst, error / max(1.0, abs(exact)))
        if error > allowed:
            failures += 1

    return CheckResult(
        "third-degree-exactness",
        failures == 0,
        f"{failures}/{EXACTNESS_CASES} cases off, "
        f"worst relative error {worst:.3g}",
    )


def _within_standard_errors(estimates, oracle: float):
    estimates = np.asarray(estimates, dtype=float).reshape(-1)
    mean = float(np.mean(estimates))
    se = float(np.std(estimates, ddof=1) / math.sqrt(estimates.size))
    return abs(mean - oracle) <= STANDARD_ERRORS * se, mean, se


def _cos(a):
    a = np.asarray(a, dtype=float)

    def cos(x):
        return np.cos(x @ a)

    return Integrand(cos, vectorized=True)


def check_unbiasedness(seed: int = 0, nu: float = 5.0) -> CheckResult:
    """Single-sample estimates of ``E[cos(a'x)]`` average to the truth."""
    rng = RngStream(seed, 3)
    rule = SSTSRCR(1)

    cases = (
        (np.array([1.0]), np.zeros(1), np.eye(1)),
        (
            np.array([1.0, 0.5]),
            np.array([0.3, -0.2]),
            np.array([[1.0, 0.3], [0.3, 0.5]]),
        ),
    )

    passed, details = True, []
    for i, (a, mu, sigma) in enumerate(cases):
        density = StudentTDensity(mu, sigma, nu)
        estimates = rule.sample_estimates(
            _cos(a), density, rng.derive(i), count=UNBIASED_REPLICATIONS
        )

        oracle = student_t_cos_expectation(a, mu, sigma, nu)
        ok, mean, se = _within_standard_errors(estimates, oracle)

        passed &= ok
        details.append(
            f"n={mu.size}: {mean:.5f} vs {oracle:.5f} (se {se:.2g})"
        )

    return CheckResult("unbiasedness", passed, "; ".join(details))


def check_radial_law(seed: int = 0) -> CheckResult:
    """The radial draws follow their Beta law and moment identity."""
    rng = RngStream(seed, 4)

    passed, details = True, []
    for i, (n, nu) in enumerate(RADIAL_CASES):
        r = sample_radial_point(rng.derive(i), n, nu, size=RADIAL_DRAWS)
        r2 = r**2

        expected = (n + 2) / (nu - 4)
        mean = float(np.mean(r2))
        moment_ok = abs(mean / expected - 1.0) <= 0.02

        tau = r2 / (1.0 + r2)
        law = stats.beta(0.5 * (n + 2), 0.5 * (nu - 2))
        pvalue = float(stats.kstest(tau, law.cdf).pvalue)
        ks_ok = pvalue > SIGNIFICANCE

        passed &= moment_ok and ks_ok
        details.append(
            f"(n={n}, nu={nu:g}): E[r2] {mean:.4f} vs {expected:.4f}, "
            f"KS p={pvalue:.3f}"
        )

    return CheckResult("radial-law", passed, "; ".join(details))


def check_variance_ordering(
    seed: int = 0,
    samples: int = 10,
    nu: float = 5.0,
) -> CheckResult:
    """The stochastic rule beats Monte Carlo at an equal evaluation budget.

    ``samples`` rule samples cost ``3 * samples`` evaluations in one
    dimension; Monte Carlo gets the same number of draws. The variances of
    the replicated estimates are compared with a one-sided F-test.

    """
    rng = RngStream(seed, 5)
    density = StudentTDensity(np.zeros(1), np.eye(1), nu)
    g = _cos([1.0])

    budget = 3 * samples

    cubature = SSTSRCR(samples).sample_estimates(
        g, density, rng.derive(0), count=VARIANCE_REPLICATIONS
    )
    monte_carlo = MonteCarlo(budget).sample_estimates(
        g, density, rng.derive(1), count=VARIANCE_REPLICATIONS
    )

    var_cubature = float(np.var(cubature, ddof=1))
    var_mc = float(np.var(monte_carlo, ddof=1))

    dof = VARIANCE_REPLICATIONS - 1
    pvalue = float(stats.f.sf(var_mc / var_cubature, dof, dof))

    return CheckResult(
        "variance-ordering",
        pvalue < SIGNIFICANCE,
        f"{budget} evaluations: var {var_cubature:.3g} vs Monte Carlo "
        f"{var_mc:.3g}, F-test p={pvalue:.3g}",
    )


def check_determinism(seed: int = 0) -> CheckResult:
    density = StudentTDensity(np.array([0.5, -1.0]), np.eye(2), 5.0)
    g = _cos([1.0, 1.0])

    first = sstsrcr_integrate(g, density, 10, RngStream(seed, 6))
    second = sstsrcr_integrate(g, density, 10, RngStream(seed, 6))

    return CheckResult(
        "determinism",
        bool(np.array_equal(first, second)),
        "identical streams give identical estimates",
    )


def check_limit_consistency(seed: int = 0) -> CheckResult:
    """At very large ``nu`` the stochastic rule agrees with the SIR."""
    mu = np.array([0.5, -1.0])
    sigma = np.array([[2.0, 0.5], [0.5, 1.0]])

    def linear(x):
        return x

    def quadratic(x):
        y = x - mu
        return np.einsum("ki,kj->kij", y, y).reshape(len(x), -1)

    passed, details = True, []
    for name, g in (("linear", linear), ("quadratic", quadratic)):
        report = limit_consistency_check(
            Integrand(g, vectorized=True), mu, sigma, n_samples=10, seed=seed
        )
        ok = report.relative_gap <= 1e-4
        passed &= ok
        details.append(f"{name} gap {report.relative_gap:.2g}")

    a = np.array([1.0, 0.5])
    oracle = gaussian_cos_expectation(a, mu, sigma)
    rng = RngStream(seed, 7)

    for i, (rule, density) in enumerate(
        (
            (SSTSRCR(1), StudentTDensity(mu, sigma, LIMIT_DOF)),
            (SIR(1), StudentTDensity.gaussian(mu, sigma)),
        )
    ):
        estimates = rule.sample_estimates(
            _cos(a), density, rng.derive(i), count=LIMIT_SAMPLES
        )
        ok, mean, _ = _within_standard_errors(estimates, oracle)
        passed &= ok
        details.append(f"{rule.name} cos {mean:.5f} vs {oracle:.5f}")

    return CheckResult("limit-consistency", passed, "; ".join(details))


def run_checks(
    seed: int = 0,
    nu: t.Optional[float] = None,
) -> t.List[CheckResult]:
    """Run every check.

    :param nu: Degrees of freedom for the normalization and exactness
        checks, which otherwise draw ``nu`` at random per case.

    :raises DofTooSmall: ``nu <= 2``.

    """
    if nu is not None and not nu > 2:
        raise DofTooSmall(nu)

    checks: t.List[t.Callable[[], CheckResult]] = [
        lambda: check_weight_normalization(seed, nu),
        lambda: check_third_degree_exactness(seed, nu),
        lambda: check_unbiasedness(seed),
        lambda: check_radial_law(seed),
        lambda: check_variance_ordering(seed),
        lambda: check_determinism(seed),
        lambda: check_limit_consistency(seed),
    ]

    results = []
    for check in checks:
        result = check()
        logger.info("%s", result)
        results.append(result)

    return results
