"""Experiment files and environment overrides.

An experiment file is YAML with one mapping per section::

    scenario:
      dt: 1.0
      steps: 100
      sigma_w: 1.0e-6
      sigma_v: 4.0e-4
    monte_carlo:
      runs: 200
      seed: 7
    filters:
      rstscf: {cls: rstscf}
      sif: {cls: sif}

Any key can be overridden from the environment as
``TCUBATURE_<SECTION>_<KEY>``, e.g. ``TCUBATURE_MONTE_CARLO_RUNS=20``; the
value is parsed as YAML. ``TCUBATURE_FILTERS`` takes a comma separated list
of filter names.

"""
import dataclasses
import logging
import os
import typing as t

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .exceptions import ConfigError
from .filters import Filter, FilterBank, filter_class
from .tracking import (
    Contamination,
    DofConfig,
    PlatformConfig,
    PriorConfig,
    ScenarioConfig,
    TargetConfig,
)
from .utils import get_namespace

logger = logging.getLogger(__name__)

ENV_PREFIX = "TCUBATURE_"

DEFAULT_FILTERS = ("rstscf", "sif", "rstcf_det", "rstmcf")

REQUIRED_SCENARIO_KEYS = ("dt", "steps", "sigma_w", "sigma_v")

SECTIONS: t.Dict[str, t.Optional[type]] = {
    "scenario": None,
    "contamination": Contamination,
    "target": TargetConfig,
    "platform": PlatformConfig,
    "prior": PriorConfig,
    "dof": DofConfig,
    "monte_carlo": None,
    "filters": None,
    "output": None,
}

MONTE_CARLO_KEYS = ("runs", "samples", "seed", "workers")


@dataclass
class FilterSpec:
    """A named filter and the keyword arguments it is built with.

    :param name: Name the filter is registered and reported under.
    :param cls: Registered short name or dotted import path.

    """

    name: str
    cls: str
    options: t.Dict[str, t.Any] = field(default_factory=dict)

    def create(self, samples: t.Optional[int] = None) -> Filter:
        """Build the filter; ``samples`` is the experiment's ``N``.

        :raises ConfigError: The class cannot be resolved or rejects the
            options.

        """
        options = dict(self.options)

        try:
            filter_cls = filter_class(self.cls)
            if samples is not None and filter_cls.scenario_samples:
                options.setdefault("n_samples", samples)

            return filter_cls(**options)
        except (TypeError, ConfigError) as exc:
            raise ConfigError(f"filters.{self.name}", str(exc))


@dataclass
class OutputConfig:
    directory: Path = Path("results")
    summary: str = "summary.csv"
    series: str = "rmse_series.csv"

    timing: bool = False
    """Write mean step times, which differ between invocations."""


@dataclass
class ExperimentSpec:
    """Everything needed to run and report one benchmark experiment."""

    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    filters: t.List[FilterSpec] = field(
        default_factory=lambda: [FilterSpec(n, n) for n in DEFAULT_FILTERS]
    )
    output: OutputConfig = field(default_factory=OutputConfig)

    workers: t.Optional[int] = None
    """Worker processes, ``None`` for every available CPU."""

    def validate(self) -> "ExperimentSpec":
        """Check the scenario and the filter list.

        :raises ConfigError: naming the first offending key.

        """
        self.scenario.validate()

        if not self.filters:
            raise ConfigError("filters", "no filters configured")

        names = [spec.name for spec in self.filters]
        for name in names:
            if names.count(name) > 1:
                raise ConfigError(f"filters.{name}", "duplicate filter name")

        if self.workers is not None and not self.workers >= 1:
            raise ConfigError("monte_carlo.workers", "must be >= 1")

        return self

    def select(self, names: t.Sequence[str]) -> "ExperimentSpec":
        """Keep only the filters named in ``names``, in that order.

        A name that is not configured is added with its default options.

        """
        configured = {spec.name: spec for spec in self.filters}
        filters = [
            configured.get(name) or FilterSpec(name, name) for name in names
        ]
        return dataclasses.replace(self, filters=filters)

    def build_bank(self) -> FilterBank:
        bank = FilterBank()
        for spec in self.filters:
            bank.register(spec.create(self.scenario.samples), name=spec.name)
        return bank


def _coerce(key: str, default, value):
    """Convert ``value`` to the type of ``default``."""
    if value is None:
        return value

    try:
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise TypeError("expected true or false")
            return value
        if isinstance(default, int):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"{value!r} is not an integer")
            return int(value)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, tuple):
            return tuple(float(v) for v in value)
        if isinstance(default, Path):
            return Path(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, f"invalid value {value!r}: {exc}")

    return value


def _as_float(key: str, value):
    """Floats and nested lists of floats; YAML reads ``1e-6`` as a string."""
    try:
        if isinstance(value, (list, tuple)):
            return [_as_float(key, v) for v in value]
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"invalid value {value!r}")


def _section(data: t.Mapping, name: str) -> t.Dict[str, t.Any]:
    section = data.get(name) or {}
    if not isinstance(section, t.Mapping):
        raise ConfigError(name, "must be a mapping")
    return dict(section)


def _build(cls, name: str, values: t.Mapping[str, t.Any]):
    """Build the dataclass ``cls`` from ``values``, rejecting unknown keys."""
    defaults = cls()
    kwargs = {}
    for key, value in values.items():
        if not hasattr(defaults, key):
            raise ConfigError(f"{name}.{key}", "unknown key")
        default = getattr(defaults, key)
        if name == "prior" and key == "p0":
            kwargs[key] = _as_float(f"{name}.{key}", value)
        else:
            kwargs[key] = _coerce(f"{name}.{key}", default, value)
    return cls(**kwargs)


def _filter_specs(value) -> t.List[FilterSpec]:
    if isinstance(value, str):
        value = [name.strip() for name in value.split(",") if name.strip()]

    if isinstance(value, (list, tuple)):
        return [FilterSpec(str(name), str(name)) for name in value]

    if not isinstance(value, t.Mapping):
        raise ConfigError("filters", "must be a mapping or a list of names")

    specs = []
    for name, options in value.items():
        if not isinstance(options, (t.Mapping, type(None))):
            raise ConfigError(f"filters.{name}", "must be a mapping")
        options = dict(options or {})
        cls = options.pop("cls", name)
        specs.append(FilterSpec(str(name), str(cls), options))
    return specs


def environ_overrides(
    environ: t.Optional[t.Mapping[str, str]] = None,
) -> t.Dict[str, t.Any]:
    """Collect ``TCUBATURE_<SECTION>_<KEY>`` variables as nested sections.

    :raises ConfigError: A variable names no known section.

    """
    if environ is None:
        environ = os.environ

    rv: t.Dict[str, t.Any] = {}
    for key, raw in get_namespace(environ, ENV_PREFIX).items():
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigError(key, f"cannot parse {raw!r}: {exc}")

        if key == "filters":
            rv["filters"] = value
            continue

        for section in SECTIONS:
            if key.startswith(f"{section}_"):
                rv.setdefault(section, {})[key[len(section) + 1 :]] = value
                break
        else:
            raise ConfigError(ENV_PREFIX + key.upper(), "unknown section")

        logger.debug("Config key %s overridden from the environment", key)

    return rv


def merge(base: t.Mapping, overrides: t.Mapping) -> t.Dict[str, t.Any]:
    """Merge ``overrides`` into ``base`` one section deep."""
    rv = {key: value for key, value in base.items()}
    for key, value in overrides.items():
        if key != "filters" and isinstance(value, t.Mapping):
            section = dict(rv.get(key) or {})
            section.update(value)
            rv[key] = section
        else:
            rv[key] = value
    return rv


def load_file(path: t.Union[str, os.PathLike]) -> t.Dict[str, t.Any]:
    """Read an experiment file.

    :raises ConfigError: The file is missing or is not YAML.

    """
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except OSError as exc:
        raise ConfigError("config", f"cannot read '{path}': {exc.strerror}")
    except yaml.YAMLError as exc:
        raise ConfigError("config", f"'{path}' is not valid YAML: {exc}")

    if not isinstance(data, t.Mapping):
        raise ConfigError("config", f"'{path}' must hold a mapping")

    for key in data:
        if key not in SECTIONS:
            raise ConfigError(str(key), "unknown section")

    return dict(data)


def parse_experiment(data: t.Mapping[str, t.Any]) -> ExperimentSpec:
    """Build an :class:`ExperimentSpec` from loaded sections.

    :raises ConfigError: naming the first offending key.

    """
    scenario = _section(data, "scenario")
    monte_carlo = _section(data, "monte_carlo")

    kwargs: t.Dict[str, t.Any] = {}
    defaults = ScenarioConfig()

    for key, value in scenario.items():
        if key not in REQUIRED_SCENARIO_KEYS:
            raise ConfigError(f"scenario.{key}", "unknown key")
        if key == "sigma_w":
            kwargs[key] = _as_float("scenario.sigma_w", value)
        else:
            kwargs[key] = _coerce(
                f"scenario.{key}", getattr(defaults, key), value
            )

    workers = monte_carlo.pop("workers", None)
    for key, value in monte_carlo.items():
        if key not in MONTE_CARLO_KEYS:
            raise ConfigError(f"monte_carlo.{key}", "unknown key")
        kwargs[key] = _coerce(
            f"monte_carlo.{key}", getattr(defaults, key), value
        )

    for name, cls in SECTIONS.items():
        if cls is not None:
            kwargs[name] = _build(cls, name, _section(data, name))

    spec = ExperimentSpec(
        scenario=ScenarioConfig(**kwargs),
        workers=_coerce("monte_carlo.workers", 0, workers),
    )

    if data.get("filters") is not None:
        spec.filters = _filter_specs(data["filters"])

    spec.output = _build(OutputConfig, "output", _section(data, "output"))

    return spec


def load_experiment(
    path: t.Optional[t.Union[str, os.PathLike]] = None,
    overrides: t.Optional[t.Mapping[str, t.Any]] = None,
    environ: t.Optional[t.Mapping[str, str]] = None,
) -> ExperimentSpec:
    """Load an experiment: file, then environment, then ``overrides``.

    Without ``path`` every key takes its published default. With ``path``
    the file must set every key of :data:`REQUIRED_SCENARIO_KEYS`.

    :raises ConfigError: naming the first offending key.

    """
    data: t.Dict[str, t.Any] = {}
    if path is not None:
        data = load_file(path)

    data = merge(data, environ_overrides(environ))

    if path is not None:
        scenario = data.get("scenario") or {}
        for key in REQUIRED_SCENARIO_KEYS:
            if key not in scenario:
                raise ConfigError(f"scenario.{key}", "missing key")
    if overrides:
        data = merge(data, overrides)

    return parse_experiment(data).validate()
