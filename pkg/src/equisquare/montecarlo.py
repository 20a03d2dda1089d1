"""Monte Carlo estimate of the consecutive-line distribution.

Samples are produced in fixed blocks of ``block_size`` squares.  Block ``b``
always draws from stream ``b`` of the master seed (see
:func:`equisquare.squares.stream_rng`), and worker ``k`` of ``w`` is handed
the contiguous block range ``[k*q, (k+1)*q)`` with ``q = ceil(blocks / w)``.
Tallies therefore depend only on ``(n, iterations, master_seed,
block_size)``, never on how many workers ran or in what order they finished.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np
from scipy import stats as sps

from .counting import PmfTable
from .squares import BatchSampler, consecutive_counts, sample_batch, stream_rng

__all__ = [
    "BLOCK_SIZE",
    "InsufficientCells",
    "SampleStats",
    "BandCheck",
    "ChiSquareResult",
    "run_simulation",
    "band_halfwidth",
    "band_check",
    "chi_square_gof",
    "summary_dict",
    "summary_json",
    "parse_summary",
    "trace_csv",
]

BLOCK_SIZE = 1 << 16
DEFAULT_RESOLUTION = 10_000
POOLED_ORDERS = (3, 4, 5)
POOL_FROM = 3


class InsufficientCells(ValueError):
    pass


@dataclass(frozen=True)
class SampleStats:
    n: int
    iterations: int
    master_seed: int
    workers: int
    counts: dict[int, int]
    elapsed: float = field(default=0.0, compare=False)
    trace: tuple[tuple[int, tuple[int, ...]], ...] = field(default=(), compare=False, repr=False)

    def empirical(self, x: int) -> Fraction:
        return Fraction(self.counts.get(x, 0), self.iterations)


def _block_bounds(iterations: int, block_size: int, b: int) -> tuple[int, int]:
    start = b * block_size
    return start, min(start + block_size, iterations)


def _run_blocks(
    n: int,
    iterations: int,
    master_seed: int,
    block_size: int,
    first: int,
    last: int,
    sampler: BatchSampler,
    resolution: int,
) -> list[tuple[np.ndarray, list[tuple[int, np.ndarray]]]]:
    """Tally blocks ``first..last-1``; one ``(counts, checkpoints)`` per block."""
    width = 2 * n + 1
    out = []
    for b in range(first, last):
        start, stop = _block_bounds(iterations, block_size, b)
        rng = stream_rng(master_seed, b)
        xs = consecutive_counts(sampler(n, stop - start, rng), n)
        counts = np.bincount(xs, minlength=width)
        marks: list[tuple[int, np.ndarray]] = []
        if resolution:
            first_mark = (start // resolution + 1) * resolution
            positions = range(first_mark, stop + 1, resolution)
            if len(positions):
                cum = np.cumsum(np.eye(width, dtype=np.int64)[xs], axis=0)
                marks = [(c, cum[c - start - 1]) for c in positions]
        out.append((counts, marks))
    return out


def run_simulation(
    n: int,
    iterations: int,
    master_seed: int,
    workers: int = 1,
    *,
    sampler: BatchSampler = sample_batch,
    block_size: int = BLOCK_SIZE,
    trace_resolution: int = 0,
) -> SampleStats:
    """Draw ``iterations`` uniform squares of order ``n`` and tally ``X_n``.

    ``trace_resolution > 0`` also records the running tallies after every
    ``trace_resolution`` samples (in global sample order).
    """
    if n < 2:
        raise ValueError("simulation needs n >= 2")
    if iterations < 1 or workers < 1 or block_size < 1:
        raise ValueError("iterations, workers and block_size must be positive")
    started = time.perf_counter()
    blocks = math.ceil(iterations / block_size)
    quota = math.ceil(blocks / workers)
    ranges = [(k * quota, min((k + 1) * quota, blocks)) for k in range(workers)]
    ranges = [r for r in ranges if r[0] < r[1]]
    args = (n, iterations, master_seed, block_size)
    if workers == 1 or len(ranges) == 1:
        parts = [_run_blocks(*args, lo, hi, sampler, trace_resolution) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_blocks, *args, lo, hi, sampler, trace_resolution)
                for lo, hi in ranges
            ]
            parts = [f.result() for f in futures]

    width = 2 * n + 1
    total = np.zeros(width, dtype=np.int64)
    trace = []
    for part in parts:
        for counts, marks in part:
            for c, partial in marks:
                trace.append((c, tuple(int(v) for v in total + partial)))
            total += counts
    counts = {x: int(c) for x, c in enumerate(total) if c}
    return SampleStats(
        n=n,
        iterations=iterations,
        master_seed=master_seed,
        workers=workers,
        counts=counts,
        elapsed=time.perf_counter() - started,
        trace=tuple(trace),
    )


# -- confidence bands -----------------------------------------------------------

@dataclass(frozen=True)
class BandCheck:
    """Empirical frequency against the exact probability.

    ``tail`` marks a pooled bucket covering every value ``>= x``.
    """

    x: int
    empirical: Fraction
    exact: Fraction
    band_halfwidth: float
    within: bool
    tail: bool = False

    @property
    def label(self) -> str:
        return f"{self.x}+" if self.tail else str(self.x)


def band_halfwidth(p: Fraction, iterations: int) -> float:
    """``max(5 sqrt(p(1-p)/N), p/100)``."""
    pf = float(p)
    return max(5.0 * math.sqrt(pf * (1.0 - pf) / iterations), 0.01 * pf)


def _check(x: int, observed: int, iterations: int, p: Fraction, tail: bool) -> BandCheck:
    emp = Fraction(observed, iterations)
    half = band_halfwidth(p, iterations)
    if p == 0:
        within = observed == 0
    else:
        within = abs(float(emp - p)) <= half
    return BandCheck(x, emp, p, half, within, tail)


def band_check(stats: SampleStats, pmf: PmfTable) -> list[BandCheck]:
    """One check per value in the support; ``x >= 3`` is pooled for n in 3..5."""
    if stats.n != pmf.n:
        raise ValueError("sample and distribution orders differ")
    support = sorted(set(pmf.entries) | set(stats.counts))
    N = stats.iterations
    if stats.n in POOLED_ORDERS:
        checks = [_check(x, stats.counts.get(x, 0), N, pmf[x], False) for x in support if x < POOL_FROM]
        observed = sum(c for x, c in stats.counts.items() if x >= POOL_FROM)
        checks.append(_check(POOL_FROM, observed, N, pmf.tail(POOL_FROM), True))
        return checks
    return [_check(x, stats.counts.get(x, 0), N, pmf[x], False) for x in support]


# -- chi-square goodness of fit ---------------------------------------------------

@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    cells: tuple[tuple[int, ...], ...]


def _pool_cells(expected: dict[int, float], min_expected: float) -> list[list[int]]:
    keep = [[x] for x in sorted(expected) if expected[x] >= min_expected]
    small = [x for x in sorted(expected) if expected[x] < min_expected]
    if not small:
        return keep
    if sum(expected[x] for x in small) >= min_expected or not keep:
        return keep + [small]
    target = min(keep, key=lambda cell: (sum(expected[x] for x in cell), cell))
    target.extend(small)
    target.sort()
    return keep


def chi_square_gof(stats: SampleStats, pmf: PmfTable, min_expected: float = 5.0) -> ChiSquareResult:
    """Pearson test of the tallies against the exact distribution.

    Cells whose expected count is below ``min_expected`` are pooled; if the
    pool is still too small it joins the smallest remaining cell.
    """
    if stats.n != pmf.n:
        raise ValueError("sample and distribution orders differ")
    N = stats.iterations
    support = set(pmf.entries) | set(stats.counts)
    expected = {x: float(pmf[x]) * N for x in support}
    cells = _pool_cells(expected, min_expected)
    if len(cells) < 2:
        raise InsufficientCells(f"only {len(cells)} cell(s) after pooling")
    statistic = 0.0
    for cell in cells:
        e = sum(expected[x] for x in cell)
        o = sum(stats.counts.get(x, 0) for x in cell)
        if e == 0:
            if o:
                statistic = math.inf
            continue
        statistic += (o - e) ** 2 / e
    dof = len(cells) - 1
    p_value = 0.0 if math.isinf(statistic) else float(sps.chi2.sf(statistic, dof))
    return ChiSquareResult(statistic, dof, p_value, tuple(tuple(c) for c in cells))


# -- serialization -------------------------------------------------------------------

def _check_dict(c: BandCheck) -> dict:
    return {
        "x": c.label,
        "empirical": str(c.empirical),
        "exact": str(c.exact),
        "band": repr(c.band_halfwidth),
        "within": c.within,
    }


def summary_dict(stats: SampleStats, checks: Iterable[BandCheck] = ()) -> dict:
    return {
        "n": stats.n,
        "iterations": str(stats.iterations),
        "seed": str(stats.master_seed),
        "workers": stats.workers,
        "counts": {str(x): str(c) for x, c in sorted(stats.counts.items())},
        "checks": [_check_dict(c) for c in checks],
    }


def summary_json(stats: SampleStats, checks: Iterable[BandCheck] = ()) -> str:
    """Canonical summary: sorted keys, integers as decimal strings, no timings."""
    return json.dumps(summary_dict(stats, checks), sort_keys=True, indent=2) + "\n"


def parse_summary(text: str) -> tuple[SampleStats, list[BandCheck]]:
    d = json.loads(text)
    stats = SampleStats(
        n=int(d["n"]),
        iterations=int(d["iterations"]),
        master_seed=int(d["seed"]),
        workers=int(d["workers"]),
        counts={int(x): int(c) for x, c in d["counts"].items()},
    )
    checks = []
    for c in d["checks"]:
        label = c["x"]
        tail = label.endswith("+")
        checks.append(
            BandCheck(
                x=int(label.rstrip("+")),
                empirical=Fraction(c["empirical"]),
                exact=Fraction(c["exact"]),
                band_halfwidth=float(c["band"]),
                within=bool(c["within"]),
                tail=tail,
            )
        )
    return stats, checks


def trace_csv(stats: SampleStats, support: Optional[Iterable[int]] = None) -> str:
    """Running frequencies as ``iteration,x,empirical`` rows."""
    xs = list(support) if support is not None else list(range(2 * stats.n + 1))
    lines = ["iteration,x,empirical"]
    for iteration, tallies in stats.trace:
        for x in xs:
            count = tallies[x] if x < len(tallies) else 0
            lines.append(f"{iteration},{x},{count / iteration!r}")
    return "\n".join(lines) + "\n"
