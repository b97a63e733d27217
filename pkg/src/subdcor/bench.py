"""
Monte Carlo accuracy benchmarks on the synthetic families.

Every (support size, replication) unit derives its own random streams from
the master seed, so a report does not depend on the number of worker
processes or the order in which replications finish.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .dc_baseline import dc_scores
from .decision import Decision, decide, relative_gap
from .errors import InvalidSpecError
from .seeding import seed_sequence, substream
from .subsampling import DEFAULT_GRID, SubsampleConfig, infer_direction
from .synth import DEFAULT_NOISE_SUPPORT, FAMILIES, GeneratorSpec, generate

__all__ = [
    "METHODS",
    "REPORT_COLUMNS",
    "BenchmarkSpec",
    "CellResult",
    "AccuracyReport",
    "run_benchmark",
    "emit_report",
    "relative_gap",
]

METHODS = ("SUB", "DC")
REPORT_COLUMNS = ("method", "support_size", "accuracy", "mean_relative_gap", "ties", "failures",
                  "seconds")


@dataclass(frozen=True)
class BenchmarkSpec:
    family: str = "exp1-modified"
    support_sizes: tuple[int, ...] = (20,)
    n_datasets: int = 100
    n_samples: int = 2000
    methods: tuple[str, ...] = METHODS
    m: int = 100
    p_grid: tuple[float, ...] = DEFAULT_GRID
    noise_support: tuple[int, ...] = DEFAULT_NOISE_SUPPORT
    master_seed: int = 0
    tie_credit: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "support_sizes", tuple(int(s) for s in self.support_sizes))
        object.__setattr__(self, "methods", tuple(m.upper() for m in self.methods))
        if self.family not in FAMILIES:
            raise InvalidSpecError(f"unknown family {self.family!r}")
        if not self.support_sizes:
            raise InvalidSpecError("support_sizes must not be empty")
        if self.n_datasets < 1:
            raise InvalidSpecError("n_datasets must be at least 1")
        if self.n_samples < 1:
            raise InvalidSpecError("n_samples must be at least 1")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise InvalidSpecError(f"methods must be a non-empty subset of {METHODS}")
        if not 0.0 <= self.tie_credit <= 1.0:
            raise InvalidSpecError("tie_credit must lie in [0, 1]")

    @classmethod
    def paper_scale(cls, **kwargs) -> "BenchmarkSpec":
        """1000 datasets of 2000 samples per support size."""
        kwargs.setdefault("n_datasets", 1000)
        kwargs.setdefault("n_samples", 2000)
        return cls(**kwargs)

    def subsample_config(self) -> SubsampleConfig:
        return SubsampleConfig(m=self.m, p_grid=self.p_grid, seed=self.master_seed)

    def generator_spec(self, support: int) -> GeneratorSpec:
        return GeneratorSpec(family=self.family, x_support=support, y_support=support,
                             noise_support=self.noise_support, n=self.n_samples,
                             seed=self.master_seed)


@dataclass
class CellResult:
    method: str
    support_size: int
    n_datasets: int
    tie_credit: float = 0.5
    correct: int = 0
    incorrect: int = 0
    ties: int = 0
    failures: int = 0
    gaps: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def accuracy(self) -> float:
        return (self.correct + self.tie_credit * self.ties) / self.n_datasets

    @property
    def mean_relative_gap(self) -> float:
        return math.fsum(self.gaps) / len(self.gaps) if self.gaps else math.nan


@dataclass
class AccuracyReport:
    spec: BenchmarkSpec
    cells: list[CellResult]
    seconds: float = 0.0

    def cell(self, method: str, support_size: int) -> CellResult:
        for c in self.cells:
            if c.method == method and c.support_size == support_size:
                return c
        raise KeyError((method, support_size))


@dataclass(frozen=True)
class _Outcome:
    method: str
    decision: Decision | None  # None on failure
    gap: float
    seconds: float


def _replicate(spec: BenchmarkSpec, support: int, rep: int) -> list[_Outcome]:
    try:
        data = generate(spec.generator_spec(support), substream(spec.master_seed, support, rep, 0))
    except Exception:
        return [_Outcome(m, None, math.nan, 0.0) for m in spec.methods]
    outcomes = []
    for method in spec.methods:
        t0 = time.perf_counter()
        try:
            if method == "SUB":
                rep_seed = seed_sequence(spec.master_seed, support, rep, 1)
                report = infer_direction(data.dataset, spec.subsample_config(), seed=rep_seed)
                decision, gap = report.decision, report.relative_gap
            else:
                s_f, s_b = dc_scores(data.dataset)
                decision, gap = decide(s_f, s_b), relative_gap(s_f, s_b)
        except Exception:
            decision, gap = None, math.nan
        outcomes.append(_Outcome(method, decision, gap, time.perf_counter() - t0))
    return outcomes


def _replicate_task(args):
    return _replicate(*args)


def run_benchmark(spec: BenchmarkSpec, workers: int = 1, progress=None) -> AccuracyReport:
    """Accuracy of each method per support size, counted against truth x -> y.

    Errors in generation or inference count as failures.  ``progress`` is an
    optional callable receiving ``(done, total)``.
    """
    t0 = time.perf_counter()
    tasks = [(spec, s, r) for s in spec.support_sizes for r in range(spec.n_datasets)]
    cells = {(m, s): CellResult(m, s, spec.n_datasets, spec.tie_credit)
             for s in spec.support_sizes for m in spec.methods}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replicate_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        results = []
        for i, task in enumerate(tasks):
            results.append(_replicate_task(task))
            if progress is not None:
                progress(i + 1, len(tasks))
    # Aggregate in task order so floating sums never depend on scheduling.
    for (_, s, _), outcomes in zip(tasks, results):
        for o in outcomes:
            cell = cells[(o.method, s)]
            cell.seconds += o.seconds
            if o.decision is None:
                cell.failures += 1
                continue
            cell.gaps.append(o.gap)
            if o.decision is Decision.TIE:
                cell.ties += 1
            elif o.decision is Decision.X_TO_Y:
                cell.correct += 1
            else:
                cell.incorrect += 1
    ordered = [cells[(m, s)] for s in spec.support_sizes for m in spec.methods]
    return AccuracyReport(spec, ordered, time.perf_counter() - t0)


def _num(v: float) -> str:
    return "" if math.isnan(v) else repr(float(v))


def emit_report(report: AccuracyReport | None, path, timing: bool = False) -> Path:
    """Write one CSV row per (method, support size).

    Wall-clock seconds are only written when ``timing`` is set; otherwise the
    column is left blank so that reruns with the same seed are byte-identical.
    """
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(REPORT_COLUMNS)
            for c in (report.cells if report is not None else []):
                w.writerow([c.method, c.support_size, _num(c.accuracy), _num(c.mean_relative_gap),
                            c.ties, c.failures, f"{c.seconds:.3f}" if timing else ""])
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
    return path

