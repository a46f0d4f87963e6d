import numpy as np
import pytest

from tcubature import signals
from tcubature.filters import (
    FilterBank,
    NoiseSpec,
    StateEstimate,
    measurement_update,
)
from tcubature.filters.student_t import RSTCF
from tcubature.rules import Integrand, RuleRegistry
from tcubature.rules.deterministic import STSRCR


@pytest.fixture
def rules():
    return RuleRegistry()


@pytest.fixture
def bank():
    return FilterBank()


def test_on_register_rule(rules):
    captured = []

    def capture(registry, rule):
        captured.append((registry, rule))

    with signals.on_register_rule.connected_to(capture):
        rules.register(STSRCR)

        assert captured == [(rules, STSRCR)]


def test_on_unregister_rule(mocker, rules):
    stub = mocker.stub(name="on_unregister_rule")
    rules.register(STSRCR)

    def on_unregister_rule(sender, rule):
        stub(sender, rule)

    with signals.on_unregister_rule.connected_to(on_unregister_rule):
        rules.unregister("stsrcr")
        rules.unregister("stsrcr", ignore_missing=True)

    stub.assert_called_once_with(rules, STSRCR)


def test_on_register_filter(bank):
    captured = []

    def capture(bank, filter):
        captured.append((bank, filter))

    with signals.on_register_filter.connected_to(capture):
        filter_ = bank.register(RSTCF)

        assert captured[0][0] is bank
        assert captured[0][1] is filter_


def test_on_unregister_filter(mocker, bank):
    stub = mocker.stub(name="on_unregister_filter")
    filter_ = bank.register(RSTCF)

    def on_unregister_filter(sender, filter):
        stub(sender, filter)

    with signals.on_unregister_filter.connected_to(on_unregister_filter):
        bank.unregister("rstcf_det")

    stub.assert_called_once_with(bank, filter_)


def test_on_jitter_applied():
    captured = []

    def capture(sender, jitter):
        captured.append((sender, jitter))

    # both rows measure x[0], so the innovation scale matrix is singular
    h = Integrand(lambda x: x[:, [0, 0]], vectorized=True)
    state = StateEstimate(np.zeros(2), np.eye(2), 5.0)
    r_spec = NoiseSpec(np.zeros((2, 2)), 5.0)

    with signals.on_jitter_applied.connected_to(capture):
        _, report = measurement_update(
            state, [0.1, 0.1], h, None, r_spec, STSRCR(), sender="update"
        )

        assert len(captured) == 1
        assert captured[0][0] == "update"
        assert captured[0][1] == report.jitter
        assert report.jitter > 0
