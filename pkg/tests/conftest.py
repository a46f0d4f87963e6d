import factory
import numpy as np
import pytest

from tcubature.core import RngStream
from tcubature.rules import StudentTDensity
from tcubature.tracking import ScenarioConfig


def pytest_addoption(parser):
    parser.addoption(
        "--benchmark",
        action="store_true",
        default=False,
        help="run full-scale benchmark tests",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--benchmark"):
        # --benchmark given in cli: do not skip benchmark tests
        return
    skip_benchmark = pytest.mark.skip(
        reason="need --benchmark option to run",
    )
    for item in items:
        if "benchmark" in item.keywords:
            item.add_marker(skip_benchmark)


def generate_spd(n=2):
    a = np.random.default_rng().standard_normal((n, n))
    return a @ a.T / n + 0.5 * np.eye(n)


class StudentTDensityFactory(factory.Factory):
    class Meta:
        model = StudentTDensity

    class Params:
        dim = 2

    mean = factory.LazyAttribute(
        lambda o: np.random.default_rng().standard_normal(o.dim)
    )
    scale = factory.LazyAttribute(lambda o: generate_spd(o.dim))
    nu = factory.Faker("pyfloat", min_value=4.0, max_value=30.0)


class ScenarioConfigFactory(factory.Factory):
    """A short scenario that runs in well under a second per run."""

    class Meta:
        model = ScenarioConfig

    steps = 20
    runs = 2
    samples = 5
    seed = factory.Sequence(lambda n: n)


@pytest.fixture
def rng():
    return RngStream(1234)


@pytest.fixture
def density():
    return StudentTDensityFactory()


@pytest.fixture
def scenario():
    return ScenarioConfigFactory()
