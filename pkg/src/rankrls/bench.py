"""Scaling benchmarks: timed solve-from-scratch and per-update experiments.

Four experiment shapes mirror the complexity claims: full-rank square systems
(expected ~n^3 solve time), full-rank rectangular systems at fixed row count
(~linear in the column count), rank-deficient square systems at fixed rank
(~n^2, the rank-exploiting regime), and the per-update cost of absorbing a
dependent observation at fixed width (~linear in rank).

Cells are timed with ``time.perf_counter``; one warmup run per cell is
discarded and the median over repetitions is kept.  Exponents come from a
least-squares fit in log-log space over the largest half of the grid, since
small sizes only approach the asymptotic slope.
"""

from __future__ import annotations

import csv
import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .matrices import random_standardized
from .scalars import FLOAT64
from .solver import RecursiveSolver, solve_batch

EXPERIMENTS = ("square", "rect-fixed-n", "rank-fixed-r", "update-cost")

# Timed quanta below this are dominated by timer resolution and scheduler
# noise; cells are grouped or flagged accordingly.
MIN_TIMED_SECONDS = 1e-3


@dataclass(frozen=True)
class FitResult:
    """Power-law fit t = prefactor * size^exponent of timing data."""

    exponent: float
    prefactor: float
    r_squared: float


@dataclass(frozen=True)
class BenchSample:
    experiment: str
    n: int
    m: int
    r: int
    rep: int
    seconds: float


@dataclass(frozen=True)
class BenchPlan:
    """One scaling experiment: a size grid plus measurement settings."""

    experiment: str
    grid: tuple
    repetitions: int = 5
    variant: str = "general"
    scalar: object = FLOAT64
    seed: int = 0

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.repetitions < 3:
            raise ValueError("repetitions must be at least 3")
        if len(self.grid) < 2:
            raise ValueError("need at least two grid sizes")
        swept = [self.swept_size(cell) for cell in self.grid]
        if any(b <= a for a, b in zip(swept, swept[1:])):
            raise ValueError("grid must be strictly increasing in the swept parameter")
        for n, m, r in self.grid:
            if not 1 <= r <= min(n, m):
                raise ValueError(f"invalid grid cell {(n, m, r)}")

    def swept_size(self, cell):
        n, m, r = cell
        if self.experiment == "rect-fixed-n":
            return m
        if self.experiment == "update-cost":
            return r
        return n


def make_plan(experiment, sizes, *, fixed_n=100, fixed_r=100, fixed_m=2000,
              repetitions=5, variant="general", scalar=FLOAT64, seed=0):
    """Build the grid for an experiment from its swept-size list."""
    sizes = [int(s) for s in sizes]
    if experiment == "square":
        grid = [(s, s, s) for s in sizes]
    elif experiment == "rect-fixed-n":
        grid = [(fixed_n, s, fixed_n) for s in sizes]
    elif experiment == "rank-fixed-r":
        grid = [(s, s, fixed_r) for s in sizes]
    elif experiment == "update-cost":
        grid = [(s, fixed_m, s) for s in sizes]
    else:
        raise ValueError(f"unknown experiment {experiment!r}")
    return BenchPlan(experiment, tuple(grid), repetitions=repetitions,
                     variant=variant, scalar=scalar, seed=seed)


def fit_loglog(sizes, seconds):
    """Least-squares power-law fit through all given (size, time) points."""
    logs = np.log(np.asarray(sizes, dtype=np.float64))
    logt = np.log(np.asarray(seconds, dtype=np.float64))
    if len(logs) < 2:
        raise ValueError("need at least two points to fit")
    exponent, intercept = np.polyfit(logs, logt, 1)
    predicted = exponent * logs + intercept
    ss_res = float(np.sum((logt - predicted) ** 2))
    ss_tot = float(np.sum((logt - logt.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return FitResult(float(exponent), math.exp(float(intercept)), r_squared)


def fit_tail(sizes, seconds):
    """Fit over the largest half of the grid (at least two points)."""
    order = np.argsort(sizes)
    keep = order[len(order) // 2 :] if len(order) > 3 else order[-2:]
    return fit_loglog([sizes[i] for i in keep], [seconds[i] for i in keep])


def run_plan(plan, progress=None):
    """Execute a plan; returns (samples, fit over per-size medians).

    Repetitions are interleaved round-robin across cells (after one discarded
    warmup per cell) so that slow machine-state drift hits every cell alike
    and cancels out of the fitted exponent.
    """
    timers = [_prepare_cell(plan, index, cell) for index, cell in enumerate(plan.grid)]
    for timer in timers:
        timer()  # warmup, discarded
    times = [[] for _ in plan.grid]
    for rep in range(plan.repetitions):
        for slot, timer in enumerate(timers):
            times[slot].append(timer())

    samples = []
    medians = []
    swept = []
    for slot, cell in enumerate(plan.grid):
        for rep, seconds in enumerate(times[slot]):
            samples.append(BenchSample(plan.experiment, *cell, rep, seconds))
        medians.append(float(np.median(times[slot])))
        swept.append(plan.swept_size(cell))
        if medians[-1] < MIN_TIMED_SECONDS:
            warnings.warn(
                f"cell {cell} of {plan.experiment} ran in {medians[-1]:.2e}s; "
                "timer resolution may dominate",
                stacklevel=2,
            )
        if progress is not None:
            progress(cell, medians[-1])
    return samples, fit_tail(swept, medians)


def _cell_seed(plan, index, stream):
    mix = np.random.SeedSequence([plan.seed, index, stream])
    return int(mix.generate_state(1, dtype=np.uint64)[0])


def _prepare_cell(plan, index, cell):
    """Build one cell's timed closure; returns seconds per timed unit."""
    if plan.experiment == "update-cost":
        return _prepare_update_cell(plan, index, cell)
    n, m, r = cell
    # The generator stream is reset per cell so inputs are reproducible.
    A = random_standardized(n, m, r, _cell_seed(plan, index, 0))
    y = np.random.default_rng(_cell_seed(plan, index, 1)).standard_normal(n)

    def timed_solve():
        start = time.perf_counter()
        solve_batch(A, y, variant=plan.variant, scalar=plan.scalar)
        return time.perf_counter() - start

    return timed_solve


def _prepare_update_cell(plan, index, cell):
    r, m, _ = cell
    rng = np.random.default_rng(_cell_seed(plan, index, 0))
    basis_rows = rng.standard_normal((r, m))
    solver = RecursiveSolver(m, variant=plan.variant, scalar=plan.scalar)
    solver.ingest(basis_rows, rng.standard_normal(r))
    if solver.rank != r:
        raise RuntimeError(f"prefix did not reach rank {r}")
    # Dependent probes: random combinations of the ingested basis rows,
    # timed in blocks so each quantum clears the timer floor.
    block = 32
    probes = rng.standard_normal((block, r)) @ basis_rows
    targets = rng.standard_normal(block)

    def timed_updates():
        start = time.perf_counter()
        solver.ingest(probes, targets)
        elapsed = (time.perf_counter() - start) / block
        if solver.rank != r:
            raise RuntimeError("probe updates unexpectedly grew the rank")
        return elapsed

    return timed_updates


def write_csv(samples, path):
    """Samples as CSV: experiment, n, m, r, rep, seconds (17 significant digits)."""
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow(["experiment", "n", "m", "r", "rep", "seconds"])
        for s in samples:
            writer.writerow([s.experiment, s.n, s.m, s.r, s.rep, f"{s.seconds:.17g}"])
