import math

import numpy as np

from tcubature.report import format_float, format_summary, summary_rows
from tcubature.tracking.metrics import FilterMetrics, MetricsTable


def table():
    truths = np.zeros((2, 3, 4))
    estimates = truths + np.array([3.0, 4.0, 0.0, 0.0])
    metrics = FilterMetrics.from_arrays(
        "rstscf", truths, estimates, np.full((2, 3), 1e-3)
    )
    return MetricsTable(steps=3, runs=2, filters={"rstscf": metrics})


def test_format_float():
    assert format_float(None) == ""
    assert format_float(1.0) == "1"
    assert format_float(1 / 3) == "0.3333333333"
    assert format_float(math.nan) == "nan"


def test_summary_rows():
    rows = list(summary_rows(table(), timing=True))

    assert rows[1] == ("rstscf", "5", "0", "1", "0")


def test_summary_rows_timing_off_by_default():
    rows = list(summary_rows(table()))

    assert rows[1][3] == ""


def test_format_summary():
    text = format_summary(table(), timing=False)

    assert "rstscf" in text
    assert "5.000 +/- 0.000" in text
    assert text.endswith("2 runs of 3 steps")
