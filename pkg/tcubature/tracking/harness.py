"""Monte Carlo harness for the bearings-only benchmark.

Run ``s`` draws its truth from stream ``(seed, s, 0)``, its initial
estimate from ``(seed, s, 1)`` and the randomness of filter ``name`` from
``(seed, s, 2, crc32(name))``, so results do not depend on the worker
count, on completion order or on which other filters are run.

"""
import logging
import math
import os
import time
import typing as t
import zlib

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..core import RngStream, sample_multivariate_normal
from ..filters import Filter, FilterBank
from ..signals import on_filter_diverged, on_run_complete
from . import ScenarioConfig
from .metrics import MetricsTable
from .model import BearingsOnlyModel
from .simulate import RunRecord, simulate_truth

logger = logging.getLogger(__name__)

TRUTH_STREAM = 0
PRIOR_STREAM = 1
FILTER_STREAM = 2

Filters = t.Union[FilterBank, t.Sequence[Filter], t.Mapping[str, Filter]]


def filter_stream(rng: RngStream, name: str) -> RngStream:
    return rng.derive(FILTER_STREAM, zlib.crc32(name.encode("utf-8")))


def as_bank(filters: Filters) -> FilterBank:
    """Register ``filters`` (a bank, a mapping or a sequence) on a bank."""
    if isinstance(filters, FilterBank):
        return filters

    bank = FilterBank()
    if isinstance(filters, t.Mapping):
        for name, filter_ in filters.items():
            bank.register(filter_, name=name)
    else:
        for filter_ in filters:
            bank.register(filter_)
    return bank


def run_single(
    cfg: ScenarioConfig,
    filters: Filters,
    run: int,
) -> RunRecord:
    """Simulate run ``run`` and pass its measurements to every filter."""
    bank = as_bank(filters)
    rng = RngStream(cfg.seed, run)

    model = BearingsOnlyModel(cfg)
    record = simulate_truth(rng.derive(TRUTH_STREAM), cfg, model, run=run)
    steps = record.steps

    x0 = sample_multivariate_normal(
        rng.derive(PRIOR_STREAM), record.initial, cfg.prior.matrix
    )
    q_spec, r_spec = model.q_spec(), model.r_spec()
    streams = {name: filter_stream(rng, name) for name in bank}

    states = bank.initial_estimates(x0, cfg.prior.matrix, cfg.dof.nu3)
    for name in bank:
        record.estimates[name] = np.full((steps, 4), math.nan)
        record.step_times[name] = np.zeros(steps)
        record.diverged[name] = None

    for k in range(steps):
        outcomes = bank.step(
            states,
            record.measurements[k],
            model.system(k + 1),
            q_spec,
            r_spec,
            streams,
        )

        for name, outcome in outcomes.items():
            record.step_times[name][k] = outcome.seconds

            if outcome.error is None:
                states[name] = outcome.state
                record.estimates[name][k] = outcome.state.mean
                continue

            # a diverged filter is dropped for the rest of the run
            del states[name]
            record.diverged[name] = k + 1

            on_filter_diverged.send(
                bank.get(name), run=run, step=k + 1, error=outcome.error
            )

            logger.warning(
                "Filter %s diverged in run %d at step %d: %s",
                name,
                run,
                k + 1,
                outcome.error,
            )

    return record


def _run_job(job):
    cfg, filters, run = job
    return run_single(cfg, filters, run)


def iter_runs(
    cfg: ScenarioConfig,
    filters: Filters,
    workers: t.Optional[int] = 1,
) -> t.Iterator[RunRecord]:
    """Yield the run records in run order.

    :param workers: Worker processes; ``None`` uses every available CPU and
        ``1`` runs in this process.

    """
    bank = as_bank(filters)
    if workers is None:
        workers = os.cpu_count() or 1

    jobs = ((cfg, bank, run) for run in range(cfg.runs))

    if workers <= 1 or cfg.runs == 1:
        yield from map(_run_job, jobs)
        return

    chunksize = max(1, cfg.runs // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        yield from executor.map(_run_job, jobs, chunksize=chunksize)


def run_monte_carlo(
    cfg: ScenarioConfig,
    filters: Filters,
    workers: t.Optional[int] = 1,
    keep_records: bool = False,
) -> MetricsTable:
    """Run the benchmark and aggregate RMSE and ARMSE per filter.

    :param keep_records: Attach the run records to the table as
        ``table.records``.

    :raises ConfigError: ``cfg`` is invalid.

    """
    cfg.validate()
    bank = as_bank(filters)
    bank.ensure_filter()

    start = time.perf_counter()

    records = []
    for record in iter_runs(cfg, bank, workers=workers):
        on_run_complete.send(None, run=record.run, record=record)
        records.append(record)

    table = MetricsTable.from_records(records, list(bank))
    if keep_records:
        table.records = records

    logger.info(
        "Ran %d runs of %d filters in %.1f s",
        cfg.runs,
        len(bank),
        time.perf_counter() - start,
    )

    return table
