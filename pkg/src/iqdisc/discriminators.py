"""Readout-state classifiers on the IQ plane.

Three shapes: the standard linear discriminant fitted from |0>/|1>
calibration runs, and two region classifiers (a pair of circles, a pair of
rotated ellipses) whose shots outside both regions are ignored rather than
forced into a state. All region parameters live in z-scored IQ coordinates;
every fitted model therefore carries the normalization used at fit time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DegenerateDataError, InvalidInputError

__all__ = [
    "Label",
    "Normalization",
    "LinearDiscriminator",
    "Circle",
    "Ellipse",
    "CircleDiscriminator",
    "EllipseDiscriminator",
    "Discriminator",
    "FittedModel",
    "ObservedP0",
    "fit_normalization",
    "fit_linear",
    "classify",
    "label_normalized",
    "label_shots",
    "observed_p0",
]

# Class means closer than this are treated as inseparable.
MEAN_SEPARATION_EPS = 1e-9


class Label(enum.Enum):
    ZERO = 0
    ONE = 1
    IGNORED = 2


def iq_to_xy(points) -> np.ndarray:
    """Complex IQ samples to an (N, 2) float array of (I, Q) pairs."""
    arr = np.asarray(points)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    return np.column_stack((arr.real.astype(float), arr.imag.astype(float)))


@dataclass(frozen=True)
class Normalization:
    """Per-axis z-scoring fitted on the pooled training shots."""

    mean_i: float
    mean_q: float
    std_i: float
    std_q: float

    def __post_init__(self):
        if self.std_i <= 0.0 or self.std_q <= 0.0:
            raise InvalidInputError("normalization stds must be positive")

    def transform(self, points) -> np.ndarray:
        xy = iq_to_xy(points)
        return (xy - (self.mean_i, self.mean_q)) / (self.std_i, self.std_q)


@dataclass(frozen=True)
class LinearDiscriminator:
    """Oriented line in normalized coordinates; w.x + b >= 0 means |0>."""

    w: tuple[float, float]
    b: float

    def __post_init__(self):
        object.__setattr__(self, "w", (float(self.w[0]), float(self.w[1])))
        if math.hypot(*self.w) == 0.0:
            raise InvalidInputError("linear discriminator needs a nonzero normal")


class Circle(NamedTuple):
    x: float
    y: float
    r: float


class Ellipse(NamedTuple):
    x: float
    y: float
    width: float
    height: float
    angle: float


@dataclass(frozen=True)
class CircleDiscriminator:
    """Disk per state; zero-radius disks match nothing."""

    c0: Circle
    c1: Circle

    def __post_init__(self):
        object.__setattr__(self, "c0", Circle(*map(float, self.c0)))
        object.__setattr__(self, "c1", Circle(*map(float, self.c1)))
        for c in (self.c0, self.c1):
            if c.r < 0.0:
                raise InvalidInputError(f"negative radius: {c.r!r}")


@dataclass(frozen=True)
class EllipseDiscriminator:
    """Rotated filled ellipse per state; width/height are full axis lengths."""

    e0: Ellipse
    e1: Ellipse

    def __post_init__(self):
        object.__setattr__(self, "e0", Ellipse(*map(float, self.e0)))
        object.__setattr__(self, "e1", Ellipse(*map(float, self.e1)))
        for e in (self.e0, self.e1):
            if e.width < 0.0 or e.height < 0.0:
                raise InvalidInputError("negative ellipse axis")
            if not -math.pi <= e.angle <= math.pi:
                raise InvalidInputError(f"ellipse angle outside [-pi, pi]: {e.angle!r}")


Discriminator = Union[LinearDiscriminator, CircleDiscriminator, EllipseDiscriminator]


@dataclass(frozen=True)
class FittedModel:
    """A discriminator bundled with the normalization it was fitted under."""

    discriminator: Discriminator
    norm: Normalization

    @property
    def kind(self) -> str:
        return {
            LinearDiscriminator: "linear",
            CircleDiscriminator: "circle",
            EllipseDiscriminator: "ellipse",
        }[type(self.discriminator)]


class ObservedP0(NamedTuple):
    """Observed |0> probability plus a flag for the no-captured-shots fallback."""

    p0: float
    degenerate: bool


def fit_normalization(points) -> Normalization:
    """Per-axis mean and population standard deviation of the pooled points."""
    xy = iq_to_xy(points)
    if xy.shape[0] < 2:
        raise InvalidInputError("normalization needs at least 2 points")
    means = xy.mean(axis=0)
    stds = xy.std(axis=0)
    if stds[0] == 0.0 or stds[1] == 0.0:
        raise DegenerateDataError("zero variance on an IQ axis")
    return Normalization(float(means[0]), float(means[1]), float(stds[0]), float(stds[1]))


def fit_linear(cal0, cal1) -> FittedModel:
    """Fisher linear discriminant from |0> and |1> calibration shots.

    Computes w = S_pooled^-1 (mu0 - mu1) on z-scored points, places the
    boundary through the midpoint of the projected class means, and orients
    w so the |0> calibration mean projects positive.
    """
    cal0 = np.asarray(cal0)
    cal1 = np.asarray(cal1)
    if cal0.size < 2 or cal1.size < 2:
        raise InvalidInputError("each calibration run needs at least 2 points")
    norm = fit_normalization(np.concatenate([cal0, cal1]))
    x0 = norm.transform(cal0)
    x1 = norm.transform(cal1)
    mu0 = x0.mean(axis=0)
    mu1 = x1.mean(axis=0)
    if np.linalg.norm(mu0 - mu1) < MEAN_SEPARATION_EPS:
        raise DegenerateDataError("calibration means coincide")
    d0 = x0 - mu0
    d1 = x1 - mu1
    pooled = (d0.T @ d0 + d1.T @ d1) / (len(x0) + len(x1) - 2)
    try:
        w = np.linalg.solve(pooled, mu0 - mu1)
    except np.linalg.LinAlgError as exc:
        raise DegenerateDataError("singular pooled covariance") from exc
    if not np.all(np.isfinite(w)):
        raise DegenerateDataError("non-finite discriminant direction")
    b = -float(w @ ((mu0 + mu1) / 2.0))
    if float(w @ mu0) + b < 0.0:
        w, b = -w, -b
    disc = LinearDiscriminator(w=(float(w[0]), float(w[1])), b=b)
    return FittedModel(disc, norm)


def _circle_metric(xy: np.ndarray, c: Circle) -> np.ndarray:
    """Distance-to-center over radius; inf where the disk is degenerate."""
    d = np.hypot(xy[:, 0] - c.x, xy[:, 1] - c.y)
    if c.r > 0.0:
        return d / c.r
    return np.full(len(xy), np.inf)


def _ellipse_metric(xy: np.ndarray, e: Ellipse) -> np.ndarray:
    """Quadratic form after centering, derotating, and axis scaling; inf if degenerate."""
    if e.width <= 0.0 or e.height <= 0.0:
        return np.full(len(xy), np.inf)
    dx = xy[:, 0] - e.x
    dy = xy[:, 1] - e.y
    ca, sa = math.cos(e.angle), math.sin(e.angle)
    u = (ca * dx + sa * dy) / (e.width / 2.0)
    v = (-sa * dx + ca * dy) / (e.height / 2.0)
    return u * u + v * v


def _region_labels(m0: np.ndarray, m1: np.ndarray) -> np.ndarray:
    """Resolve two membership metrics (inside iff <= 1) into labels.

    Inside neither region ignores the shot; inside both, the smaller metric
    wins with ties going to |0>.
    """
    in0 = m0 <= 1.0
    in1 = m1 <= 1.0
    labels = np.full(len(m0), Label.IGNORED.value, dtype=np.int8)
    labels[in0] = Label.ZERO.value
    labels[in1 & ~in0] = Label.ONE.value
    both = in0 & in1
    labels[both & (m1 < m0)] = Label.ONE.value
    return labels


def label_normalized(discriminator: Discriminator, xy: np.ndarray) -> np.ndarray:
    """Labels for points already in normalized coordinates.

    Exists so callers that evaluate many discriminators against the same
    shots (the annealer) can normalize once.
    """
    if isinstance(discriminator, LinearDiscriminator):
        score = xy @ np.asarray(discriminator.w) + discriminator.b
        return np.where(score >= 0.0, Label.ZERO.value, Label.ONE.value).astype(np.int8)
    if isinstance(discriminator, CircleDiscriminator):
        m0 = _circle_metric(xy, discriminator.c0)
        m1 = _circle_metric(xy, discriminator.c1)
        return _region_labels(m0, m1)
    if isinstance(discriminator, EllipseDiscriminator):
        m0 = _ellipse_metric(xy, discriminator.e0)
        m1 = _ellipse_metric(xy, discriminator.e1)
        return _region_labels(m0, m1)
    raise InvalidInputError(f"unknown discriminator type: {type(discriminator).__name__}")


def label_shots(discriminator: Discriminator, norm: Normalization, shots) -> np.ndarray:
    """Vector of Label values (int8) for an array of IQ shots."""
    return label_normalized(discriminator, norm.transform(shots))


def classify(discriminator: Discriminator, norm: Normalization, point: complex) -> Label:
    """Label a single IQ point."""
    return Label(int(label_shots(discriminator, norm, [point])[0]))


def observed_p0(discriminator: Discriminator, norm: Normalization, shots) -> ObservedP0:
    """Fraction of captured shots labeled |0>: n0 / (n0 + n1).

    Ignored shots are excluded from both counts. When nothing is captured
    the observed probability falls back to 0.5 with the degenerate flag set.
    """
    shots = np.asarray(shots)
    if shots.size == 0:
        raise InvalidInputError("observed_p0 of empty shot list")
    labels = label_shots(discriminator, norm, shots)
    n0 = int(np.count_nonzero(labels == Label.ZERO.value))
    n1 = int(np.count_nonzero(labels == Label.ONE.value))
    if n0 + n1 == 0:
        return ObservedP0(0.5, True)
    return ObservedP0(n0 / (n0 + n1), False)
