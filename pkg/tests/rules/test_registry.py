import pytest

from tcubature import signals
from tcubature.exceptions import RuleNotRegistered
from tcubature.rules import (
    CubaturePointSet,
    IntegrationRule,
    RuleRegistry,
    registry,
)
from tcubature.rules.deterministic import STSRCR
from tcubature.rules.montecarlo import MonteCarlo
from tcubature.rules.sir import SIR
from tcubature.rules.stochastic import SSTSRCR


class RuleTest(IntegrationRule):
    name = "test"

    def point_set(self, density, rng=None):
        return CubaturePointSet(points=density.mean[None], weights=[1.0])


@pytest.fixture
def rules():
    return RuleRegistry()


def test_defaults():
    assert set(registry) == {"sstsrcr", "stsrcr", "sir", "mc"}

    assert registry.get("sstsrcr") is SSTSRCR
    assert registry.get("stsrcr") is STSRCR
    assert registry.get("sir") is SIR
    assert registry.get("mc") is MonteCarlo


def test_capabilities():
    assert SSTSRCR.student_t and SSTSRCR.stochastic
    assert STSRCR.student_t and not STSRCR.stochastic
    assert not SIR.student_t and SIR.stochastic
    assert MonteCarlo.student_t and MonteCarlo.stochastic


def test_create():
    rule = registry.create("sstsrcr", n_samples=3)

    assert isinstance(rule, SSTSRCR)
    assert rule.n_samples == 3


def test_create_missing():
    with pytest.raises(RuleNotRegistered) as exc_info:
        registry.create("simpson")

    assert exc_info.value.name == "simpson"


def test_ensure_rule(rules):
    with pytest.raises(RuleNotRegistered):
        rules.ensure_rule()

    rules.register(RuleTest)
    rules.ensure_rule()


def test_ensure_rule_name(rules):
    with pytest.raises(RuleNotRegistered):
        rules.ensure_rule("name")

    rules.register(RuleTest, name="name")
    rules.ensure_rule("name")


def test_register_existing(rules):
    rules.register(RuleTest)

    with pytest.raises(KeyError):
        rules.register(RuleTest)

    rules.register(RuleTest, overwrite=True)


def test_unregister(rules):
    rules.register(RuleTest)
    rules.unregister("test")

    assert "test" not in rules

    with pytest.raises(RuleNotRegistered):
        rules.unregister("test")

    rules.unregister("test", ignore_missing=True)


def test_register_signals(mocker, rules):
    registered = mocker.stub(name="on_register_rule")
    unregistered = mocker.stub(name="on_unregister_rule")

    def on_register_rule(sender, rule):
        registered(sender, rule)

    def on_unregister_rule(sender, rule):
        unregistered(sender, rule)

    with signals.on_register_rule.connected_to(on_register_rule):
        with signals.on_unregister_rule.connected_to(on_unregister_rule):
            rules.register(RuleTest)
            rules.unregister("test")

    registered.assert_called_once_with(rules, RuleTest)
    unregistered.assert_called_once_with(rules, RuleTest)


def test_n_samples():
    with pytest.raises(ValueError):
        SSTSRCR(n_samples=0)
