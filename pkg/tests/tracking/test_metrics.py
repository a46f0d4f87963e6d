import math

import numpy as np
import pytest

from tcubature.exceptions import LengthMismatch
from tcubature.tracking.metrics import (
    FilterMetrics,
    MetricsTable,
    armse,
    rmse_series,
    standard_error,
)
from tcubature.tracking.simulate import RunRecord


def test_rmse_series_single_run():
    truth = np.zeros((1, 4))
    estimate = np.array([[3.0, 4.0, 0.0, 0.0]])

    pos, vel = rmse_series(truth, estimate)

    assert pos == pytest.approx([5.0])
    assert vel == pytest.approx([0.0])


def test_rmse_series_two_runs():
    truths = np.zeros((2, 1, 4))
    estimates = np.array([[[0.0, 0.0, 0.0, 0.0]], [[1.0, 1.0, 0.0, 2.0]]])

    pos, vel = rmse_series(truths, estimates)

    assert pos == pytest.approx([1.0])
    assert vel == pytest.approx([math.sqrt(2.0)])


def test_armse_is_mean_squared_series():
    gen = np.random.default_rng(3)
    truths = gen.normal(size=(7, 12, 4))
    estimates = truths + gen.normal(scale=2.0, size=(7, 12, 4))

    pos, vel = rmse_series(truths, estimates)
    armse_pos, armse_vel = armse(truths, estimates)

    assert armse_pos**2 == pytest.approx(np.mean(pos**2), abs=1e-12)
    assert armse_vel**2 == pytest.approx(np.mean(vel**2), abs=1e-12)


@pytest.mark.parametrize(
    "estimates_shape", [(3, 4, 4), (2, 5, 4)], ids=["runs", "steps"]
)
def test_length_mismatch(estimates_shape):
    with pytest.raises(LengthMismatch):
        rmse_series(np.zeros((2, 4, 4)), np.zeros(estimates_shape))


def test_standard_error():
    assert math.isnan(standard_error([1.0]))
    assert standard_error([1.0, 3.0]) == pytest.approx(1.0)


def test_filter_metrics_empty():
    metrics = FilterMetrics.from_arrays(
        "sif", np.empty(0), np.empty(0), np.empty(0), 3, steps=5
    )

    assert metrics.runs == 0
    assert metrics.diverged_runs == 3
    assert math.isnan(metrics.armse_pos)
    assert metrics.rmse_pos.shape == (5,)


def record(run, offset, diverged=None):
    truth = np.zeros((3, 4))
    estimates = truth + np.array(offset, dtype=float)
    return RunRecord(
        run=run,
        initial=np.zeros(4),
        truth=truth,
        measurements=np.zeros(3),
        estimates={"a": estimates},
        step_times={"a": np.full(3, 0.002)},
        diverged={"a": diverged},
    )


def test_metrics_table_from_records():
    records = [
        record(0, [3.0, 4.0, 0.0, 0.0]),
        record(1, [3.0, 4.0, 0.0, 0.0]),
        record(2, [100.0, 0.0, 0.0, 0.0], diverged=2),
    ]

    table = MetricsTable.from_records(records, ["a"])
    metrics = table["a"]

    assert table.runs == 3
    assert table.steps == 3
    assert [m.name for m in table] == ["a"]

    assert metrics.runs == 2
    assert metrics.diverged_runs == 1
    assert metrics.armse_pos == pytest.approx(5.0)
    assert metrics.armse_pos_se == pytest.approx(0.0)
    assert metrics.rmse_pos == pytest.approx([5.0, 5.0, 5.0])
    assert metrics.mean_step_time == pytest.approx(0.002)
