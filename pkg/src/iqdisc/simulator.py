"""Synthetic IQ readout device.

Stands in for pulse-level hardware: each shot of a micro-benchmark first
resolves its true state from the exact |0> probability, may then relax
(|1> emitting from the |0> cluster) or excite (the reverse), and finally
lands either in its cluster's Gaussian or, with a small probability, in a
broad isotropic smear centered between the clusters. The smear manufactures
a genuine high-overlap zone where both states occur with similar density.

All randomness is driven by explicit seeds. A dataset derives one seed per
run via :func:`iqdisc.seeding.derive_seed` (base seed mixed with the run
index: 0 for the |0> calibration, 1 for the |1> calibration, 2+k for run k),
so runs may be generated in parallel without changing any result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .benchmarks import BenchmarkSet, MicroBenchmark
from .errors import InvalidDeviceError, InvalidInputError
from .seeding import derive_seed

__all__ = [
    "DeviceModel",
    "RunRecord",
    "Dataset",
    "DEFAULT_DEVICE",
    "simulate_run",
    "simulate_dataset",
    "perturb_device",
]

# Salt for day-indexed drift so perturbation is a pure function of the day.
_DAY_SALT = 0xD41F7


@dataclass(frozen=True)
class DeviceModel:
    """Gaussian two-cluster readout model with relaxation, excitation, and smear.

    Covariances are stored as (ii, iq, qq) triples of the symmetric 2x2
    matrix, in readout units squared.
    """

    mu0: complex
    mu1: complex
    sigma0: tuple[float, float, float]
    sigma1: tuple[float, float, float]
    p_relax: float
    p_excite: float
    p_smear: float
    smear_scale: float

    def __post_init__(self):
        object.__setattr__(self, "mu0", complex(self.mu0))
        object.__setattr__(self, "mu1", complex(self.mu1))
        object.__setattr__(self, "sigma0", tuple(float(v) for v in self.sigma0))
        object.__setattr__(self, "sigma1", tuple(float(v) for v in self.sigma1))
        for name, sigma in (("sigma0", self.sigma0), ("sigma1", self.sigma1)):
            ii, iq, qq = sigma
            if ii <= 0.0 or qq <= 0.0 or ii * qq - iq * iq <= 0.0:
                raise InvalidDeviceError(f"{name} is not positive definite: {sigma}")
        for name in ("p_relax", "p_excite", "p_smear"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InvalidDeviceError(f"{name} out of [0, 1]: {p!r}")
        if self.p_relax + self.p_smear > 1.0 or self.p_excite + self.p_smear > 1.0:
            raise InvalidDeviceError("flip probability plus smear exceeds 1")
        if self.smear_scale <= 0.0:
            raise InvalidDeviceError(f"smear_scale must be positive: {self.smear_scale!r}")

    def _cov_matrix(self, sigma: tuple[float, float, float]) -> np.ndarray:
        ii, iq, qq = sigma
        return np.array([[ii, iq], [iq, qq]])

    def cluster_std(self, state: int) -> float:
        """Scalar scale of one cluster: root mean diagonal variance."""
        ii, _, qq = self.sigma0 if state == 0 else self.sigma1
        return math.sqrt((ii + qq) / 2.0)

    @property
    def smear_std(self) -> float:
        """Isotropic std of the smear: smear_scale times the mean cluster std."""
        return self.smear_scale * (self.cluster_std(0) + self.cluster_std(1)) / 2.0


# Unitless stand-in loosely scaled like a one-qubit superconducting readout:
# clusters one unit either side of the origin, mild asymmetric relaxation,
# and a 10% smear population. Yields a baseline median error of a few percent
# at 1024 shots.
DEFAULT_DEVICE = DeviceModel(
    mu0=0.0 + 1.0j,
    mu1=0.0 - 1.0j,
    sigma0=(0.3025, 0.0, 0.3025),
    sigma1=(0.3025, 0.0, 0.3025),
    p_relax=0.08,
    p_excite=0.01,
    p_smear=0.10,
    smear_scale=2.0,
)


@dataclass(frozen=True, eq=False)
class RunRecord:
    """One micro-benchmark together with its measured IQ shots."""

    benchmark: MicroBenchmark
    shots: np.ndarray

    def __post_init__(self):
        shots = np.asarray(self.shots, dtype=complex)
        if shots.size == 0:
            raise InvalidInputError("run record needs at least one shot")
        object.__setattr__(self, "shots", shots)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Calibration runs plus one record per micro-benchmark."""

    calibration0: np.ndarray
    calibration1: np.ndarray
    runs: tuple[RunRecord, ...]
    device_seed: int
    shots_per_run: int

    def __post_init__(self):
        object.__setattr__(self, "calibration0", np.asarray(self.calibration0, dtype=complex))
        object.__setattr__(self, "calibration1", np.asarray(self.calibration1, dtype=complex))
        object.__setattr__(self, "runs", tuple(self.runs))
        for name in ("calibration0", "calibration1"):
            if len(getattr(self, name)) != self.shots_per_run:
                raise InvalidInputError(f"{name} must hold shots_per_run points")


def simulate_run(
    device: DeviceModel, benchmark: MicroBenchmark, shots: int, seed: int
) -> RunRecord:
    """Generate the IQ shots one execution batch of a micro-benchmark yields.

    Per shot: the true state is |0> with probability correct_p0; relaxation
    moves a |1> emission to the |0> cluster with p_relax (excitation the
    reverse with p_excite); with p_smear the emission is overridden by the
    broad mid-point smear. Deterministic for a given seed.
    """
    if shots <= 0:
        raise InvalidInputError(f"shot count must be positive: {shots}")
    rng = np.random.default_rng(seed)
    u_state = rng.random(shots)
    u_flip = rng.random(shots)
    u_smear = rng.random(shots)
    z = rng.standard_normal((shots, 2))

    is_one = u_state >= benchmark.correct_p0
    emit_one = np.where(is_one, u_flip >= device.p_relax, u_flip < device.p_excite)
    smeared = u_smear < device.p_smear

    chol0 = np.linalg.cholesky(device._cov_matrix(device.sigma0))
    chol1 = np.linalg.cholesky(device._cov_matrix(device.sigma1))
    from0 = z @ chol0.T + (device.mu0.real, device.mu0.imag)
    from1 = z @ chol1.T + (device.mu1.real, device.mu1.imag)
    center = (device.mu0 + device.mu1) / 2.0
    from_smear = z * device.smear_std + (center.real, center.imag)

    xy = np.where(emit_one[:, None], from1, from0)
    xy = np.where(smeared[:, None], from_smear, xy)
    return RunRecord(benchmark, xy[:, 0] + 1j * xy[:, 1])


def simulate_dataset(
    device: DeviceModel, benchmarks: BenchmarkSet, shots: int, seed: int
) -> Dataset:
    """Two calibration runs plus one record per benchmark, all seed-derived.

    Calibration data passes through the same noisy path as any run: the |0>
    run still excites and smears, the |1> run still relaxes.
    """
    if len(benchmarks) == 0:
        raise InvalidInputError("benchmark set is empty")
    cal0 = simulate_run(
        device, MicroBenchmark.from_angles(0.0, 0.0, 0.0), shots, derive_seed(seed, 0)
    )
    cal1 = simulate_run(
        device, MicroBenchmark.from_angles(math.pi, 0.0, 0.0), shots, derive_seed(seed, 1)
    )
    runs = tuple(
        simulate_run(device, bench, shots, derive_seed(seed, 2 + k))
        for k, bench in enumerate(benchmarks.benchmarks)
    )
    return Dataset(cal0.shots, cal1.shots, runs, device_seed=seed, shots_per_run=shots)


def perturb_device(device: DeviceModel, day_index: int, drift_scale: float) -> DeviceModel:
    """Day-to-day drifted copy of a device.

    Cluster centers jitter by Gaussian noise with std drift_scale times the
    cluster separation; per-axis stds scale by (1 + drift_scale * z). The
    jitter is a fixed function of day_index, so a given day is reproducible.
    """
    if drift_scale < 0.0:
        raise InvalidInputError(f"drift_scale must be non-negative: {drift_scale!r}")
    if drift_scale == 0.0:
        return device
    rng = np.random.default_rng(derive_seed(_DAY_SALT, day_index))
    separation = abs(device.mu0 - device.mu1)
    jitter = rng.standard_normal(4) * drift_scale * separation
    mu0 = device.mu0 + complex(jitter[0], jitter[1])
    mu1 = device.mu1 + complex(jitter[2], jitter[3])
    factors = 1.0 + rng.standard_normal(4) * drift_scale
    factors = np.clip(factors, 0.2, None)

    def scaled(sigma, f1, f2):
        ii, iq, qq = sigma
        return (f1 * f1 * ii, f1 * f2 * iq, f2 * f2 * qq)

    return DeviceModel(
        mu0=mu0,
        mu1=mu1,
        sigma0=scaled(device.sigma0, factors[0], factors[1]),
        sigma1=scaled(device.sigma1, factors[2], factors[3]),
        p_relax=device.p_relax,
        p_excite=device.p_excite,
        p_smear=device.p_smear,
        smear_scale=device.smear_scale,
    )
