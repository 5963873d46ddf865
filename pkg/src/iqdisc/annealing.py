"""Black-box simulated annealing over region-classifier parameters.

A configuration is the flat parameter vector of a circle pair (6 values:
c0.x, c0.y, c0.r, c1.x, c1.y, c1.r) or an ellipse pair (10 values: x, y,
width, height, angle for each region), in normalized IQ coordinates. The
annealer walks the configuration space with uniform +/-1 steps per
coordinate, cooling geometrically, and returns the best configuration ever
evaluated.

The chain itself is inherently serial, but separate calls share no state,
so per-qubit or per-day trainings can run concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .discriminators import (
    Circle,
    CircleDiscriminator,
    Ellipse,
    EllipseDiscriminator,
    Label,
    Normalization,
    fit_normalization,
    label_normalized,
)
from .errors import InvalidInputError
from .metrics import percentile
from .simulator import Dataset

__all__ = [
    "Objective",
    "AnnealConfig",
    "TrainResult",
    "params_to_discriminator",
    "discriminator_to_params",
    "clamp_params",
    "neighbor",
    "accept_move",
    "temperature_schedule",
    "objective_value",
    "objective_from_errors",
    "run_normalization",
    "anneal",
]

CIRCLE_PARAMS = 6
ELLIPSE_PARAMS = 10

# Coordinates holding radii/axis lengths (clamped at 0) and rotation angles
# (wrapped into [-pi, pi)) per parameter-vector length.
_SIZE_IDX = {CIRCLE_PARAMS: (2, 5), ELLIPSE_PARAMS: (2, 3, 7, 8)}
_ANGLE_IDX = {CIRCLE_PARAMS: (), ELLIPSE_PARAMS: (4, 9)}


class Objective(enum.Enum):
    MEDIAN = "median"
    SPREAD = "spread"
    MEDIAN_PLUS_SPREAD = "median-plus-spread"

    @classmethod
    def from_string(cls, name: str) -> "Objective":
        for member in cls:
            if member.value == name:
                return member
        raise InvalidInputError(f"unknown objective {name!r}")


@dataclass(frozen=True)
class AnnealConfig:
    n_iter: int = 20000
    t0: float = 1.0
    alpha: float = 0.9995
    seed: int = 0
    objective: Objective = Objective.MEDIAN_PLUS_SPREAD

    def __post_init__(self):
        if self.n_iter < 0:
            raise InvalidInputError(f"n_iter must be >= 0: {self.n_iter}")
        if self.t0 <= 0.0:
            raise InvalidInputError(f"t0 must be positive: {self.t0!r}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidInputError(f"alpha must be in (0, 1): {self.alpha!r}")


@dataclass(frozen=True, eq=False)
class TrainResult:
    best_params: np.ndarray
    best_objective: float
    objective_trace: tuple[tuple[int, float], ...]
    evaluations: int


def _kind_length(kind: str) -> int:
    if kind == "circle":
        return CIRCLE_PARAMS
    if kind == "ellipse":
        return ELLIPSE_PARAMS
    raise InvalidInputError(f"unknown classifier kind {kind!r}")


def clamp_params(params: np.ndarray) -> np.ndarray:
    """Enforce parameter-vector invariants in place: sizes >= 0, angles wrapped."""
    n = len(params)
    if n not in _SIZE_IDX:
        raise InvalidInputError(f"parameter vector must have 6 or 10 entries, got {n}")
    for i in _SIZE_IDX[n]:
        params[i] = max(params[i], 0.0)
    for i in _ANGLE_IDX[n]:
        params[i] = math.remainder(params[i], 2.0 * math.pi)
        if params[i] == math.pi:
            params[i] = -math.pi
    return params


def params_to_discriminator(params) -> CircleDiscriminator | EllipseDiscriminator:
    """Materialize the region discriminator a parameter vector describes."""
    p = [float(v) for v in params]
    if len(p) == CIRCLE_PARAMS:
        return CircleDiscriminator(Circle(*p[0:3]), Circle(*p[3:6]))
    if len(p) == ELLIPSE_PARAMS:
        return EllipseDiscriminator(Ellipse(*p[0:5]), Ellipse(*p[5:10]))
    raise InvalidInputError(f"parameter vector must have 6 or 10 entries, got {len(p)}")


def discriminator_to_params(disc: CircleDiscriminator | EllipseDiscriminator) -> np.ndarray:
    if isinstance(disc, CircleDiscriminator):
        return np.array(disc.c0 + disc.c1, dtype=float)
    if isinstance(disc, EllipseDiscriminator):
        return np.array(disc.e0 + disc.e1, dtype=float)
    raise InvalidInputError(f"not a region discriminator: {type(disc).__name__}")


def neighbor(params: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Step every coordinate by an independent uniform draw from [-1, 1]."""
    step = rng.uniform(-1.0, 1.0, size=len(params))
    return clamp_params(np.asarray(params, dtype=float) + step)


def accept_move(energy: float, temperature: float, rng: np.random.Generator) -> bool:
    """Annealing acceptance: downhill always, uphill with probability e^(E/T).

    ``energy`` is current-best objective minus candidate objective, so
    positive energy means the candidate improves. A zero-energy move is
    rejected and consumes no randomness.
    """
    if energy > 0.0:
        return True
    if energy < 0.0:
        if temperature <= 0.0:
            return False
        return rng.random() < math.exp(energy / temperature)
    return False


def temperature_schedule(t0: float, alpha: float, n_iter: int) -> np.ndarray:
    """Closed-form temperatures before each iteration: t0 * alpha**k, k = 0..n_iter-1."""
    return t0 * np.power(alpha, np.arange(n_iter))


def objective_from_errors(errors, objective: Objective) -> float:
    """Reduce per-run errors to the selected scalar objective."""
    if objective is Objective.MEDIAN:
        return percentile(errors, 0.5)
    if objective is Objective.SPREAD:
        return percentile(errors, 0.75) - percentile(errors, 0.25)
    return percentile(errors, 0.5) + (percentile(errors, 0.75) - percentile(errors, 0.25))


def run_normalization(training: Dataset) -> Normalization:
    """Normalization the annealer works in: fit on all run shots pooled."""
    return fit_normalization(np.concatenate([r.shots for r in training.runs]))


class _TrainingCache:
    """Normalized shot coordinates of every training run, concatenated once."""

    def __init__(self, training: Dataset, norm: Normalization):
        if len(training.runs) == 0:
            raise InvalidInputError("training dataset has no runs")
        self.xy = norm.transform(np.concatenate([r.shots for r in training.runs]))
        lengths = np.array([len(r.shots) for r in training.runs])
        self.starts = np.concatenate([[0], np.cumsum(lengths)[:-1]])
        self.correct = np.array([r.benchmark.correct_p0 for r in training.runs])

    def errors(self, disc) -> np.ndarray:
        """Per-run output errors (percent) under one discriminator.

        Runs capturing no shot fall back to observed 0.5, matching
        :func:`iqdisc.discriminators.observed_p0`.
        """
        labels = label_normalized(disc, self.xy)
        n0 = np.add.reduceat((labels == Label.ZERO.value).astype(np.intp), self.starts)
        captured = np.add.reduceat((labels != Label.IGNORED.value).astype(np.intp), self.starts)
        observed = np.where(captured == 0, 0.5, n0 / np.maximum(captured, 1))
        return np.abs(self.correct - observed) * 100.0


def objective_value(
    params,
    kind: str,
    training: Dataset,
    norm: Normalization,
    objective: Objective,
) -> float:
    """Objective of one parameter configuration over a training dataset."""
    if len(params) != _kind_length(kind):
        raise InvalidInputError(
            f"{kind} configuration needs {_kind_length(kind)} parameters, got {len(params)}"
        )
    cache = _TrainingCache(training, norm)
    return objective_from_errors(cache.errors(params_to_discriminator(params)), objective)


def _initial_params(kind: str, xy: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random starting configuration spanning the data's extent.

    Centers are uniform in the normalized bounding box, sizes uniform in
    (0, 2], angles uniform in [-pi, pi]. Draws happen in parameter order.
    """
    lo = xy.min(axis=0)
    hi = xy.max(axis=0)
    n = _kind_length(kind)
    params = np.empty(n)
    for i in range(n):
        j = i % (n // 2)
        if j == 0:
            params[i] = rng.uniform(lo[0], hi[0])
        elif j == 1:
            params[i] = rng.uniform(lo[1], hi[1])
        elif i in _ANGLE_IDX[n]:
            params[i] = rng.uniform(-math.pi, math.pi)
        else:
            params[i] = 2.0 - rng.uniform(0.0, 2.0)
    return clamp_params(params)


def anneal(
    training: Dataset,
    kind: str,
    config: AnnealConfig,
    literal_mode: bool = False,
) -> TrainResult:
    """Train a circle or ellipse configuration against a dataset.

    Runs the annealing chain (random start, neighbor proposals, geometric
    cooling by ``alpha`` each iteration) and by default returns the
    minimum-objective configuration ever evaluated, accepted or not. With
    ``literal_mode`` the anchor configuration left standing at the end is
    returned instead, exactly as the chain's accept rule produced it.
    Deterministic for a given config.
    """
    _kind_length(kind)
    norm = run_normalization(training)
    cache = _TrainingCache(training, norm)
    rng = np.random.default_rng(config.seed)

    current = _initial_params(kind, cache.xy, rng)
    current_obj = objective_from_errors(
        cache.errors(params_to_discriminator(current)), config.objective
    )
    best = current.copy()
    best_obj = current_obj
    trace: list[tuple[int, float]] = []
    temperature = config.t0
    evaluations = 1

    for i in range(1, config.n_iter + 1):
        candidate = neighbor(current, rng)
        candidate_obj = objective_from_errors(
            cache.errors(params_to_discriminator(candidate)), config.objective
        )
        evaluations += 1
        if candidate_obj < best_obj:
            best = candidate.copy()
            best_obj = candidate_obj
        if accept_move(current_obj - candidate_obj, temperature, rng):
            current = candidate
            current_obj = candidate_obj
        trace.append((i, current_obj))
        temperature *= config.alpha

    if literal_mode:
        best, best_obj = current, current_obj
    return TrainResult(
        best_params=best,
        best_objective=best_obj,
        objective_trace=tuple(trace),
        evaluations=evaluations,
    )
