"""Single-qubit rotation micro-benchmarks with exact |0> output probabilities.

A micro-benchmark is a triple of rotation angles (theta about x, phi about y,
delta about z) applied to a qubit prepared in |0>. Its exact probability of
reading back |0> follows from the 2x2 unitary, so a set of such benchmarks
with known, spectrum-covering probabilities can score any readout classifier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GenerationError, InvalidInputError

__all__ = [
    "MicroBenchmark",
    "BenchmarkSet",
    "compute_p0",
    "generate_benchmarks",
    "probability_bin",
    "u3_matrix",
]

# Rejected draws allowed per probability bin before generation gives up.
MAX_REJECTIONS_PER_BIN = 10**6


def u3_matrix(theta: float, phi: float, delta: float) -> np.ndarray:
    """2x2 unitary Rz(delta) @ Ry(phi) @ Rx(theta).

    Each factor is the standard rotation exp(-i * angle * P / 2) for the
    corresponding Pauli axis P, applied to the ket left-to-right in the
    x, y, z axis order.
    """
    for name, angle in (("theta", theta), ("phi", phi), ("delta", delta)):
        if not math.isfinite(angle):
            raise InvalidInputError(f"{name} must be finite, got {angle!r}")
    ct, st = math.cos(theta / 2.0), math.sin(theta / 2.0)
    cp, sp = math.cos(phi / 2.0), math.sin(phi / 2.0)
    ed = complex(math.cos(delta / 2.0), -math.sin(delta / 2.0))
    rx = np.array([[ct, -1j * st], [-1j * st, ct]])
    ry = np.array([[cp, -sp], [sp, cp]])
    rz = np.array([[ed, 0.0], [0.0, ed.conjugate()]])
    return rz @ ry @ rx


def compute_p0(theta: float, phi: float, delta: float) -> float:
    """Exact probability of measuring |0> after the (theta, phi, delta) rotation."""
    amp = u3_matrix(theta, phi, delta)[0, 0]
    p0 = abs(amp) ** 2
    # |amp|^2 can exceed 1 by an ulp; keep the contract airtight.
    return min(max(float(p0), 0.0), 1.0)


def probability_bin(p0: float, bins: int = 10) -> int:
    """Index of the probability bin [k/bins, (k+1)/bins) holding ``p0``.

    The top bin is closed at 1.0.
    """
    if not 0.0 <= p0 <= 1.0:
        raise InvalidInputError(f"probability out of range: {p0!r}")
    return min(int(p0 * bins), bins - 1)


@dataclass(frozen=True)
class MicroBenchmark:
    """One rotation triple plus its exact |0> probability.

    Angles are ``None`` for runs imported from external captures, where only
    the correct probability is known.
    """

    theta: float | None
    phi: float | None
    delta: float | None
    correct_p0: float

    def __post_init__(self):
        angles = (self.theta, self.phi, self.delta)
        if any(a is None for a in angles):
            if not all(a is None for a in angles):
                raise InvalidInputError("angles must be all present or all absent")
        else:
            for name, angle in zip(("theta", "phi", "delta"), angles):
                if not math.isfinite(angle):
                    raise InvalidInputError(f"{name} must be finite")
                if not -math.pi <= angle <= math.pi:
                    raise InvalidInputError(f"{name} outside [-pi, pi]: {angle!r}")
            expected = compute_p0(self.theta, self.phi, self.delta)
            if abs(expected - self.correct_p0) > 1e-12:
                raise InvalidInputError(
                    f"correct_p0 {self.correct_p0!r} inconsistent with angles "
                    f"(expected {expected!r})"
                )
        if not 0.0 <= self.correct_p0 <= 1.0:
            raise InvalidInputError(f"correct_p0 out of range: {self.correct_p0!r}")

    @classmethod
    def from_angles(cls, theta: float, phi: float, delta: float) -> "MicroBenchmark":
        return cls(theta, phi, delta, compute_p0(theta, phi, delta))


@dataclass(frozen=True)
class BenchmarkSet:
    """Benchmarks balanced so every probability bin holds the same count."""

    benchmarks: tuple[MicroBenchmark, ...]
    bins: int = 10
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "benchmarks", tuple(self.benchmarks))
        counts = [0] * self.bins
        for b in self.benchmarks:
            counts[probability_bin(b.correct_p0, self.bins)] += 1
        if len(set(counts)) > 1:
            raise InvalidInputError(f"unbalanced probability bins: {counts}")

    def __len__(self) -> int:
        return len(self.benchmarks)


def generate_benchmarks(count: int, bins: int = 10, seed: int = 0) -> BenchmarkSet:
    """Rejection-sample uniform angle triples until every bin is full.

    Triples are drawn with each angle uniform in [-pi, pi]; a draw is kept
    only if its exact |0> probability lands in a bin that still needs
    entries. Deterministic for a given seed.
    """
    if count <= 0 or bins <= 0:
        raise InvalidInputError("count and bins must be positive")
    if count % bins != 0:
        raise InvalidInputError(f"count {count} not divisible by bins {bins}")
    per_bin = count // bins
    rng = np.random.default_rng(seed)
    kept: list[MicroBenchmark] = []
    remaining = [per_bin] * bins
    rejections = 0
    budget = MAX_REJECTIONS_PER_BIN * bins
    while len(kept) < count:
        theta, phi, delta = rng.uniform(-math.pi, math.pi, size=3)
        bench = MicroBenchmark.from_angles(theta, phi, delta)
        k = probability_bin(bench.correct_p0, bins)
        if remaining[k] > 0:
            remaining[k] -= 1
            kept.append(bench)
        else:
            rejections += 1
            if rejections > budget:
                raise GenerationError(
                    f"exceeded {budget} rejections; unfilled bins: "
                    f"{[i for i, r in enumerate(remaining) if r > 0]}"
                )
    return BenchmarkSet(benchmarks=tuple(kept), bins=bins, seed=seed)
