"""Root-mean-square error metrics over Monte Carlo runs.

Errors arrive as ``(M, T, 4)`` arrays of runs by steps by state, the state
being ``[x, y, vx, vy]``.

"""
import math
import typing as t

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import LengthMismatch

POSITION = slice(0, 2)
VELOCITY = slice(2, 4)


def _errors(truths, estimates) -> np.ndarray:
    truths = np.asarray(truths, dtype=float)
    estimates = np.asarray(estimates, dtype=float)

    if truths.ndim == 2:
        truths = truths[np.newaxis]
    if estimates.ndim == 2:
        estimates = estimates[np.newaxis]

    for axis in range(2):
        if truths.shape[axis] != estimates.shape[axis]:
            raise LengthMismatch(truths.shape[axis], estimates.shape[axis])

    return truths - estimates


def squared_errors(truths, estimates) -> t.Tuple[np.ndarray, np.ndarray]:
    """Squared position and velocity errors, each ``(M, T)``."""
    err = _errors(truths, estimates)
    pos = np.sum(err[..., POSITION] ** 2, axis=-1)
    vel = np.sum(err[..., VELOCITY] ** 2, axis=-1)
    return pos, vel


def rmse_series(truths, estimates) -> t.Tuple[np.ndarray, np.ndarray]:
    """Position and velocity RMSE at each step, averaged over runs.

    :raises LengthMismatch: run or step counts differ.

    """
    pos, vel = squared_errors(truths, estimates)
    return np.sqrt(pos.mean(axis=0)), np.sqrt(vel.mean(axis=0))


def armse(truths, estimates) -> t.Tuple[float, float]:
    """Position and velocity RMSE averaged over runs and steps."""
    pos, vel = squared_errors(truths, estimates)
    return math.sqrt(pos.mean()), math.sqrt(vel.mean())


def standard_error(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return math.nan
    return float(np.std(values, ddof=1) / math.sqrt(values.size))


@dataclass
class FilterMetrics:
    """Accuracy and cost of one filter over the runs it completed."""

    name: str
    rmse_pos: np.ndarray
    rmse_vel: np.ndarray
    armse_pos: float
    armse_vel: float
    armse_pos_se: float
    armse_vel_se: float
    mean_step_time: float
    runs: int
    diverged_runs: int

    run_armse_pos: np.ndarray = field(default_factory=lambda: np.empty(0))
    """ARMSE of position of each completed run."""

    run_armse_vel: np.ndarray = field(default_factory=lambda: np.empty(0))

    @classmethod
    def from_arrays(
        cls,
        name: str,
        truths: np.ndarray,
        estimates: np.ndarray,
        step_times: np.ndarray,
        diverged_runs: int = 0,
        steps: t.Optional[int] = None,
    ) -> "FilterMetrics":
        """Aggregate ``(M, T, 4)`` truths and estimates of completed runs.

        ``steps`` fills empty series when every run diverged.

        """
        runs = len(estimates)

        if runs == 0:
            empty = np.full(steps or 0, math.nan)
            return cls(
                name=name,
                rmse_pos=empty,
                rmse_vel=empty.copy(),
                armse_pos=math.nan,
                armse_vel=math.nan,
                armse_pos_se=math.nan,
                armse_vel_se=math.nan,
                mean_step_time=math.nan,
                runs=0,
                diverged_runs=diverged_runs,
            )

        pos, vel = squared_errors(truths, estimates)
        run_pos = np.sqrt(pos.mean(axis=1))
        run_vel = np.sqrt(vel.mean(axis=1))

        return cls(
            name=name,
            rmse_pos=np.sqrt(pos.mean(axis=0)),
            rmse_vel=np.sqrt(vel.mean(axis=0)),
            armse_pos=math.sqrt(pos.mean()),
            armse_vel=math.sqrt(vel.mean()),
            armse_pos_se=standard_error(run_pos),
            armse_vel_se=standard_error(run_vel),
            mean_step_time=float(np.mean(step_times)),
            runs=runs,
            diverged_runs=diverged_runs,
            run_armse_pos=run_pos,
            run_armse_vel=run_vel,
        )


@dataclass
class MetricsTable:
    """Per-filter metrics of a Monte Carlo experiment, in filter order."""

    steps: int
    runs: int
    filters: t.Dict[str, FilterMetrics] = field(default_factory=dict)

    records: t.List = field(default_factory=list, repr=False)
    """Run records, when the harness was asked to keep them."""

    def __getitem__(self, name: str) -> FilterMetrics:
        return self.filters[name]

    def __iter__(self):
        return iter(self.filters.values())

    @classmethod
    def from_records(cls, records, names: t.Sequence[str]) -> "MetricsTable":
        """Aggregate run records; diverged runs are left out per filter."""
        records = list(records)
        steps = records[0].steps if records else 0

        table = cls(steps=steps, runs=len(records))
        for name in names:
            done = [r for r in records if r.diverged.get(name) is None]

            truths = np.array([r.truth for r in done]).reshape(-1, steps, 4)
            estimates = np.array([r.estimates[name] for r in done]).reshape(
                -1, steps, 4
            )
            times = np.array([r.step_times[name] for r in done])

            table.filters[name] = FilterMetrics.from_arrays(
                name,
                truths,
                estimates,
                times,
                diverged_runs=len(records) - len(done),
                steps=steps,
            )

        return table
