"""Output-error definitions and percentile statistics for benchmark runs.

The central quantity is the output error of a run: |correct - observed|
probability of |0>, in percent. Sets of runs are summarized by median, 25th
and 75th percentile, spread (p75 - p25), and per-probability-bin medians.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .benchmarks import probability_bin
from .errors import InvalidInputError

__all__ = [
    "RunError",
    "BinStats",
    "ErrorStats",
    "run_error",
    "percentile",
    "summarize",
    "daily_variability",
    "compound_error",
]

N_BINS = 10

VARIABILITY_METRICS = ("median", "p25", "p75", "spread")


def run_error(correct_p0: float, observed_p0: float) -> float:
    """Output error in percent: |correct - observed| * 100."""
    for name, p in (("correct_p0", correct_p0), ("observed_p0", observed_p0)):
        if not 0.0 <= p <= 1.0:
            raise InvalidInputError(f"{name} out of [0, 1]: {p!r}")
    return abs(correct_p0 - observed_p0) * 100.0


def percentile(values: Sequence[float], p: float) -> float:
    """Linear-interpolation percentile (type 7) at fraction ``p`` in [0, 1]."""
    if len(values) == 0:
        raise InvalidInputError("percentile of empty list")
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"percentile fraction out of [0, 1]: {p!r}")
    data = np.sort(np.asarray(values, dtype=float))
    pos = p * (len(data) - 1)
    lo = int(pos)
    frac = pos - lo
    if frac == 0.0:
        return float(data[lo])
    return float(data[lo] + frac * (data[lo + 1] - data[lo]))


@dataclass(frozen=True)
class RunError:
    """Error record for one run. ``degenerate`` marks a run whose observed
    probability fell back to 0.5 because no shot landed in either region."""

    correct_p0: float
    observed_p0: float
    error_pct: float
    degenerate: bool = False

    def __post_init__(self):
        expected = run_error(self.correct_p0, self.observed_p0)
        if abs(expected - self.error_pct) > 1e-9:
            raise InvalidInputError(
                f"error_pct {self.error_pct!r} != |correct - observed| * 100"
            )

    @classmethod
    def from_probabilities(
        cls, correct_p0: float, observed_p0: float, degenerate: bool = False
    ) -> "RunError":
        return cls(correct_p0, observed_p0, run_error(correct_p0, observed_p0), degenerate)


class BinStats(NamedTuple):
    """Per-probability-bin errors; median/spread are None for empty bins."""

    lo: float
    hi: float
    count: int
    median: float | None
    spread: float | None


@dataclass(frozen=True)
class ErrorStats:
    median: float
    p25: float
    p75: float
    spread: float
    per_bin: tuple[BinStats, ...]
    degenerate_count: int = 0

    def metric(self, name: str) -> float:
        if name not in VARIABILITY_METRICS:
            raise InvalidInputError(f"unknown metric {name!r}")
        return getattr(self, name)

    @property
    def bin_medians(self) -> list[float | None]:
        return [b.median for b in self.per_bin]


def summarize(runs: Sequence[RunError]) -> ErrorStats:
    """Global and per-bin error statistics over a set of runs.

    Runs are binned by their correct |0> probability into ten 0.1-wide bins
    (top bin closed at 1.0); empty bins report None, never zero.
    """
    if len(runs) == 0:
        raise InvalidInputError("summarize of empty run list")
    errors = [r.error_pct for r in runs]
    p25 = percentile(errors, 0.25)
    p75 = percentile(errors, 0.75)
    binned: list[list[float]] = [[] for _ in range(N_BINS)]
    for r in runs:
        binned[probability_bin(r.correct_p0, N_BINS)].append(r.error_pct)
    per_bin = []
    for k, bin_errors in enumerate(binned):
        if bin_errors:
            med = percentile(bin_errors, 0.5)
            spread = percentile(bin_errors, 0.75) - percentile(bin_errors, 0.25)
        else:
            med = spread = None
        per_bin.append(BinStats(k / N_BINS, (k + 1) / N_BINS, len(bin_errors), med, spread))
    return ErrorStats(
        median=percentile(errors, 0.5),
        p25=p25,
        p75=p75,
        spread=p75 - p25,
        per_bin=tuple(per_bin),
        degenerate_count=sum(1 for r in runs if r.degenerate),
    )


def daily_variability(per_day_stats: Sequence[ErrorStats], metric: str) -> float:
    """Spread (p75 - p25) of one metric's per-day values across days."""
    if len(per_day_stats) < 2:
        raise InvalidInputError("daily variability needs at least 2 days")
    values = [stats.metric(metric) for stats in per_day_stats]
    return percentile(values, 0.75) - percentile(values, 0.25)


def compound_error(per_gate_error: float, gate_count: int) -> float:
    """Overall error after ``gate_count`` gates, each with the given error: 1 - (1 - e)^n."""
    if not 0.0 <= per_gate_error <= 1.0:
        raise InvalidInputError(f"per-gate error out of [0, 1]: {per_gate_error!r}")
    if gate_count < 1:
        raise InvalidInputError(f"gate count must be positive: {gate_count}")
    return 1.0 - (1.0 - per_gate_error) ** gate_count
