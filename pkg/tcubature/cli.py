"""Command line interface: ``run``, ``check-rule`` and ``integrate``."""
import contextlib
import logging
import math
import os
import typing as t

import click
import numpy as np

from . import __version__
from .checks import run_checks
from .config import load_experiment
from .core import RngStream
from .exceptions import ConfigError, DomainError, TcubatureException
from .report import (
    format_float,
    format_summary,
    write_series_csv,
    write_summary_csv,
)
from .rules import Integrand, StudentTDensity, registry
from .rules.diagnostics import (
    gaussian_cos_expectation,
    student_t_cos_expectation,
)
from .tracking.harness import run_monte_carlo

USAGE_ERRORS = (ConfigError, DomainError)


@contextlib.contextmanager
def _exit_on_error():
    """Report library errors and exit with 2 for usage errors, else 1."""
    try:
        yield
    except USAGE_ERRORS as exc:
        click.echo(f"Error: {exc}", err=True)
        raise SystemExit(2)
    except TcubatureException as exc:
        click.echo(f"Error: {exc}", err=True)
        raise SystemExit(1)


def _configure_logging(verbose: int, quiet: bool):
    if quiet:
        level = logging.ERROR
    else:
        level = max(logging.DEBUG, logging.WARNING - 10 * verbose)

    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s"
    )


@click.group()
@click.version_option(__version__, prog_name="tcubature")
@click.option(
    "-v", "--verbose", count=True, help="More log output, repeatable."
)
@click.option("-q", "--quiet", is_flag=True, help="Only log errors.")
def main(verbose, quiet):
    """Student's t stochastic cubature rules, filters and benchmarks."""
    _configure_logging(verbose, quiet)


def _given(**kwargs):
    return {key: value for key, value in kwargs.items() if value is not None}


@main.command()
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    help="YAML experiment file; published defaults when omitted.",
)
@click.option("--seed", type=int, help="Master seed.")
@click.option("--runs", type=int, help="Monte Carlo runs M.")
@click.option("-N", "--samples", type=int, help="Rule samples N.")
@click.option(
    "--out", type=click.Path(file_okay=False), help="Output directory."
)
@click.option(
    "--workers",
    type=int,
    help="Worker processes, default every available CPU.",
)
@click.option(
    "--filters", help="Comma separated filter names, e.g. rstscf,sif."
)
@click.option(
    "--timing/--no-timing",
    default=None,
    help="Also write mean step times, which differ between invocations.",
)
def run(config_path, seed, runs, samples, out, workers, filters, timing):
    """Run the bearings-only benchmark and write CSV tables."""
    overrides: t.Dict[str, t.Any] = {
        "monte_carlo": _given(
            seed=seed, runs=runs, samples=samples, workers=workers
        ),
        "output": _given(directory=out, timing=timing),
    }

    with _exit_on_error():
        spec = load_experiment(config_path, overrides=overrides)
        if filters:
            names = [n.strip() for n in filters.split(",") if n.strip()]
            spec = spec.select(names).validate()

        bank = spec.build_bank()

        try:
            os.makedirs(spec.output.directory, exist_ok=True)
        except OSError as exc:
            raise ConfigError("output.directory", exc.strerror)

        table = run_monte_carlo(spec.scenario, bank, workers=spec.workers)

        summary = spec.output.directory / spec.output.summary
        series = spec.output.directory / spec.output.series

        write_summary_csv(table, summary, timing=spec.output.timing)
        write_series_csv(table, series)

    click.echo(format_summary(table, timing=spec.output.timing))
    click.echo(f"Wrote {summary} and {series}")


@main.command("check-rule")
@click.option(
    "--nu",
    type=float,
    help="Degrees of freedom for the exactness checks; random otherwise.",
)
@click.option("--seed", type=int, default=0, show_default=True)
def check_rule(nu, seed):
    """Run the statistical self-checks of the integration rules."""
    with _exit_on_error():
        results = run_checks(seed=seed, nu=nu)

    for result in results:
        click.echo(str(result))

    if not all(result.passed for result in results):
        raise SystemExit(1)


def _integrand(name: str, density: StudentTDensity, gaussian: bool):
    """The built-in integrand ``name`` and its exact value, if known."""
    mu, sigma, nu = density.mean, density.scale, density.nu
    n = density.dim

    if name == "cos1d":
        a = np.zeros(n)
        a[0] = 1.0

        def cos1d(x):
            return np.cos(x[:, 0])

        if gaussian:
            oracle = gaussian_cos_expectation(a, mu, sigma)
        else:
            oracle = student_t_cos_expectation(a, mu, sigma, nu)

        return cos1d, np.array([oracle])

    if name == "mean":

        def mean(x):
            return x

        return mean, mu.copy()

    def cov(x):
        y = x - mu
        return np.einsum("ki,kj->kij", y, y).reshape(len(x), -1)

    return cov, density.covariance.reshape(-1)


def _scale(mu, sigma) -> np.ndarray:
    n = len(mu)
    if len(sigma) == 1:
        return sigma[0] * np.eye(n)
    if len(sigma) == n:
        return np.diag(sigma)
    if len(sigma) == n * n:
        return np.asarray(sigma, dtype=float).reshape(n, n)
    raise DomainError("sigma", sigma, "1, n or n * n values")


@main.command()
@click.argument("integrand", type=click.Choice(["cos1d", "mean", "cov"]))
@click.option(
    "--mu",
    type=float,
    multiple=True,
    default=(0.0,),
    show_default=True,
    help="Mean, one value per dimension.",
)
@click.option(
    "--sigma",
    type=float,
    multiple=True,
    default=(1.0,),
    show_default=True,
    help="Scale: one value (times I), a diagonal, or n * n row-major.",
)
@click.option("--nu", type=float, default=5.0, show_default=True)
@click.option(
    "--rule",
    type=click.Choice(sorted(registry)),
    default="sstsrcr",
    show_default=True,
)
@click.option("-N", "--samples", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def integrate(integrand, mu, sigma, nu, rule, samples, seed):
    """Integrate a built-in integrand and compare it with its exact value.

    Stochastic rules report the mean of N single-sample estimates and its
    standard error.

    """
    with _exit_on_error():
        rule_cls = registry.get(rule)
        gaussian = not rule_cls.student_t

        mu = np.asarray(mu, dtype=float)
        density = StudentTDensity(
            mu, _scale(mu, sigma), math.inf if gaussian else nu
        )

        g, oracle = _integrand(integrand, density, gaussian)
        g = Integrand(g, vectorized=True, name=integrand)

        rng = RngStream(seed)
        if rule_cls.stochastic:
            if samples < 1:
                raise DomainError("samples", samples, "samples >= 1")
            estimates = rule_cls(1).sample_estimates(
                g, density, rng, count=samples
            )
            estimate = estimates.mean(axis=0).reshape(-1)
            if samples > 1:
                se = estimates.std(axis=0, ddof=1).reshape(-1)
                se = se / math.sqrt(samples)
            else:
                se = np.full(estimate.shape, math.nan)
        else:
            estimate = np.asarray(rule_cls().integrate(g, density, rng))
            estimate = estimate.reshape(-1)
            se = np.zeros(estimate.shape)

    def line(values):
        return " ".join(format_float(v) for v in values)

    click.echo(f"estimate: {line(estimate)}")
    click.echo(f"oracle:   {line(oracle)}")
    click.echo(f"gap:      {line(np.abs(estimate - oracle))}")
    click.echo(f"se:       {line(se)}")
