"""Noise-percentage sweep comparing the modularity filter with the median."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import UndefinedImprovementError
from .image import Image
from .impulse import FilterConfig, denoise
from .median import median_filter
from .metrics import mask_scores, relative_improvement
from .noise import NoiseSpec, inject

DEFAULT_P_LIST = (10, 20, 30, 40, 50, 60, 70)
DEFAULT_SEEDS = (1, 2, 3)
AVERAGE_SEED = -1


@dataclass(frozen=True)
class BenchRow:
    p_percent: float
    delta_proposed: float
    delta_median: float
    precision: float
    recall: float
    runtime_ms_proposed: float
    runtime_ms_median: float
    seed: int

    def __post_init__(self):
        if not 0 <= self.p_percent <= 100:
            raise ValueError(f"p_percent must be in [0, 100], got {self.p_percent}")


CSV_HEADER = tuple(f.name for f in fields(BenchRow))


@dataclass
class Trial:
    """One (p, seed) run with the images kept for plotting."""

    row: BenchRow
    noisy: Image
    proposed: Image
    median: Image


def _delta(orig, noisy, restored) -> float:
    try:
        return relative_improvement(orig, noisy, restored)
    except UndefinedImprovementError:
        return math.nan


def run_trial(orig: Image, p_percent: float, seed: int,
              config: FilterConfig = FilterConfig(), mode: str = "random_value") -> Trial:
    noisy, truth = inject(orig, NoiseSpec(p=p_percent / 100.0, mode=mode, seed=seed))
    t0 = time.perf_counter()
    proposed, detected = denoise(noisy, config)
    t1 = time.perf_counter()
    med = median_filter(noisy)
    t2 = time.perf_counter()
    precision, recall = mask_scores(truth, detected)
    row = BenchRow(
        p_percent=float(p_percent),
        delta_proposed=_delta(orig, noisy, proposed),
        delta_median=_delta(orig, noisy, med),
        precision=precision,
        recall=recall,
        runtime_ms_proposed=(t1 - t0) * 1000.0,
        runtime_ms_median=(t2 - t1) * 1000.0,
        seed=seed,
    )
    return Trial(row, noisy, proposed, med)


def average_rows(rows: list[BenchRow]) -> list[BenchRow]:
    """One arithmetic-mean row per p, tagged with seed -1."""
    out = []
    for p in sorted({r.p_percent for r in rows}):
        group = np.array([astuple(r)[:-1] for r in rows if r.p_percent == p], dtype=np.float64)
        means = group.mean(axis=0)
        out.append(BenchRow(*(float(v) for v in means), seed=AVERAGE_SEED))
    return out


def run_bench(orig: Image, p_list=DEFAULT_P_LIST, seeds=DEFAULT_SEEDS,
              config: FilterConfig = FilterConfig(), mode: str = "random_value",
              keep=None) -> list[BenchRow]:
    """Data rows sorted by (p, seed), then the per-p averages.

    ``keep`` may be a dict; trials are stored in it keyed by (p, seed).
    """
    for p in p_list:
        if not 0 < p < 100:
            raise ValueError(f"noise percentages must lie in (0, 100), got {p}")
    if not seeds:
        raise ValueError("at least one seed is required")
    rows = []
    for p in sorted(set(p_list)):
        for seed in sorted(set(seeds)):
            trial = run_trial(orig, p, seed, config, mode)
            rows.append(trial.row)
            if keep is not None:
                keep[(p, seed)] = trial
    return rows + average_rows(rows)


def _fmt(name: str, value) -> str:
    if name == "seed":
        return str(int(value))
    if name == "p_percent":
        return f"{value:g}"
    if name.startswith("runtime"):
        return f"{value:.3f}"
    return f"{value:.6f}"


def write_csv(rows: list[BenchRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([_fmt(name, v) for name, v in zip(CSV_HEADER, astuple(r))])


def read_csv(fh) -> list[BenchRow]:
    reader = csv.reader(fh)
    header = tuple(next(reader))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    return [
        BenchRow(*(float(v) for v in rec[:-1]), seed=int(rec[-1]))
        for rec in reader if rec
    ]
