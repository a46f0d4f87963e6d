"""CSV tables and the terminal summary of a benchmark experiment.

Numbers are written with ``%.10g`` through the :mod:`csv` module with
``\\n`` line endings, so the files do not depend on the locale and identical
tables give identical bytes.

"""
import csv
import math
import os
import typing as t

from .tracking.metrics import MetricsTable

FLOAT_FORMAT = "%.10g"

SUMMARY_COLUMNS = (
    "filter",
    "armse_pos_km",
    "armse_vel_km_per_min",
    "mean_step_time_ms",
    "diverged_runs",
)


def format_float(value: t.Optional[float]) -> str:
    if value is None:
        return ""
    return FLOAT_FORMAT % float(value)


def summary_rows(table: MetricsTable, timing: bool = False):
    yield SUMMARY_COLUMNS
    for metrics in table:
        step_ms = 1e3 * metrics.mean_step_time if timing else None
        yield (
            metrics.name,
            format_float(metrics.armse_pos),
            format_float(metrics.armse_vel),
            format_float(step_ms),
            str(metrics.diverged_runs),
        )


def series_rows(table: MetricsTable):
    header = ["k"]
    for metrics in table:
        header.append(f"{metrics.name}_rmse_pos_km")
        header.append(f"{metrics.name}_rmse_vel_km_per_min")
    yield header

    for k in range(table.steps):
        row = [str(k + 1)]
        for metrics in table:
            row.append(format_float(metrics.rmse_pos[k]))
            row.append(format_float(metrics.rmse_vel[k]))
        yield row


def _write(path, rows):
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerows(rows)


def write_summary_csv(
    table: MetricsTable,
    path: t.Union[str, os.PathLike],
    timing: bool = False,
):
    """Write one row per filter.

    :param timing: Write the mean step time; the column is empty otherwise.

    """
    _write(path, summary_rows(table, timing=timing))


def write_series_csv(table: MetricsTable, path: t.Union[str, os.PathLike]):
    """Write RMSE per step, two columns per filter."""
    _write(path, series_rows(table))


def format_summary(table: MetricsTable, timing: bool = True) -> str:
    """The summary as an aligned text table."""
    lines = [
        f"{'filter':<12} {'ARMSE pos (km)':>18} {'ARMSE vel (km/min)':>20} "
        f"{'step (ms)':>10} {'diverged':>9}"
    ]

    for m in table:
        pos = f"{m.armse_pos:.3f} +/- {m.armse_pos_se:.3f}"
        step = f"{1e3 * m.mean_step_time:.3f}" if timing else "-"
        if math.isnan(m.mean_step_time):
            step = "-"
        lines.append(
            f"{m.name:<12} {pos:>18} {m.armse_vel:>20.4f} "
            f"{step:>10} {m.diverged_runs:>9d}"
        )

    lines.append(f"{table.runs} runs of {table.steps} steps")

    return "\n".join(lines)
