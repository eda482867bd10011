"""Periodic drive p(wt) and the seeded piecewise-constant noise process q(t).

The noise is constant on ``M`` equal subintervals of each drive period and
i.i.d. across subintervals and periods.  Every period has its own Philox
stream keyed by ``(master_seed, stream)`` with the period index in the
counter, so any period can be drawn without touching the others.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SEED_MAX = 2**64 - 1
GAUSSIAN_CUTOFF = 6.0
DRIVE_SHAPES = ("cosine", "fourier_series")
DISTRIBUTIONS = ("uniform", "gaussian")

# stream id reserved for initial vectors, never used by noise coefficients
_VECTOR_STREAM = SEED_MAX


def _check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


@dataclass(frozen=True)
class DriveSpec:
    """Periodic coefficient ``p(theta)`` with period 2*pi, evaluated at ``theta = omega*t``.

    ``cosine`` means ``p = amplitude*cos(theta)``.  ``fourier_series`` means
    ``p = amplitude * sum_n (fourier_cos[n-1] cos(n theta) + fourier_sin[n-1] sin(n theta))``.
    A negative amplitude is accepted (it is a half-period phase shift); the
    Schrodinger mapping produces one for a positive potential.
    """

    amplitude: float = 0.0
    omega: float = 1.0
    shape: str = "cosine"
    fourier_cos: tuple[float, ...] = ()
    fourier_sin: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fourier_cos", tuple(float(c) for c in self.fourier_cos))
        object.__setattr__(self, "fourier_sin", tuple(float(s) for s in self.fourier_sin))
        if self.shape not in DRIVE_SHAPES:
            raise ValueError(f"unknown drive shape {self.shape!r}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if not math.isfinite(self.amplitude):
            raise ValueError("amplitude must be finite")
        if self.shape == "fourier_series" and not (self.fourier_cos or self.fourier_sin):
            raise ValueError("fourier_series drive needs at least one harmonic coefficient")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def profile(self, theta):
        """p as a function of the phase ``theta`` (scalar or array)."""
        theta = np.asarray(theta, dtype=float)
        if self.shape == "cosine":
            return self.amplitude * np.cos(theta)
        out = np.zeros_like(theta)
        for n, c in enumerate(self.fourier_cos, start=1):
            out = out + c * np.cos(n * theta)
        for n, s in enumerate(self.fourier_sin, start=1):
            out = out + s * np.sin(n * theta)
        return self.amplitude * out

    def half_step_samples(self, steps_per_period: int) -> np.ndarray:
        """p at t = j*h/2, j = 0..2S, with h = T/S.

        The phases are ``pi*j/S`` whatever omega is, so the samples are exactly
        periodic: the first and last entries coincide.
        """
        j = np.arange(2 * steps_per_period + 1)
        vals = self.profile(np.pi * j / steps_per_period)
        vals[-1] = vals[0]
        return np.ascontiguousarray(vals, dtype=float)


@dataclass(frozen=True)
class Mode:
    """Fourier mode of the chi field: wavenumber k and field mass m_chi."""

    k: float = 0.0
    m_chi: float = 0.0

    def __post_init__(self):
        if not (self.k >= 0 and self.m_chi >= 0):
            raise ValueError("k and m_chi must be non-negative")

    @property
    def omega2(self) -> float:
        return self.k * self.k + self.m_chi * self.m_chi


def omega_squared(mode) -> float:
    """Accept a Mode or a bare omega_k^2 (the latter may be negative)."""
    if isinstance(mode, Mode):
        return mode.omega2
    return float(mode)


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.0
    distribution: str = "uniform"
    segments_per_period: int = 16
    master_seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if int(self.segments_per_period) < 1:
            raise ValueError("segments_per_period must be >= 1")
        object.__setattr__(self, "segments_per_period", int(self.segments_per_period))
        object.__setattr__(self, "master_seed", _check_seed(self.master_seed))

    @property
    def variance(self) -> float:
        return self.sigma**2 / 3.0 if self.distribution == "uniform" else self.sigma**2

    def with_seed(self, seed: int) -> "NoiseSpec":
        return NoiseSpec(self.sigma, self.distribution, self.segments_per_period, seed)


@dataclass(frozen=True)
class NoisePath:
    """Values of q on the M subintervals of one drive period."""

    period_index: int
    values: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def segments(self) -> int:
        return len(self.values)


def derive_seed(master_seed: int, index: int) -> int:
    """Child seed for cell ``index``; independent of evaluation order."""
    ss = np.random.SeedSequence(_check_seed(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _generator(seed: int, period_index: int, stream: int) -> np.random.Generator:
    # key words = (seed, stream); counter word 1 = period, word 0 advances per draw
    bitgen = np.random.Philox(key=seed + (stream << 64), counter=[0, period_index, 0, 0])
    return np.random.Generator(bitgen)


def _unit_draws(rng: np.random.Generator, distribution: str, size: int) -> np.ndarray:
    if distribution == "uniform":
        return 2.0 * rng.random(size) - 1.0
    z = rng.standard_normal(size)
    bad = np.abs(z) > GAUSSIAN_CUTOFF
    while bad.any():
        z[bad] = rng.standard_normal(int(bad.sum()))
        bad = np.abs(z) > GAUSSIAN_CUTOFF
    return z


def sample_noise_block(spec: NoiseSpec, start: int, count: int, n_coefficients: int = 1,
                       stream: int = 0) -> np.ndarray:
    """Noise values for periods ``start .. start+count-1``.

    Returns an array of shape ``(count, M, n_coefficients)``.  Coefficient
    ``c`` of period ``j`` uses draws ``c*M .. c*M+M-1`` of that period's
    stream, so coefficient 0 is exactly the homogeneous process and adding
    coefficients never changes the existing ones.
    """
    M = spec.segments_per_period
    out = np.zeros((count, M, n_coefficients))
    if spec.sigma == 0.0 or count == 0:
        return out
    size = M * n_coefficients
    for i in range(count):
        rng = _generator(spec.master_seed, start + i, stream)
        out[i] = spec.sigma * _unit_draws(rng, spec.distribution, size).reshape(n_coefficients, M).T
    return out


def sample_noise(spec: NoiseSpec, period_index: int) -> NoisePath:
    if period_index < 0:
        raise ValueError("period_index must be >= 0")
    values = sample_noise_block(spec, period_index, 1)[0, :, 0]
    return NoisePath(period_index, tuple(values))


def initial_vector(dim: int, seed: int) -> np.ndarray:
    """Seeded random unit vector used to start vector propagation."""
    rng = _generator(_check_seed(seed), 0, _VECTOR_STREAM)
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def eval_drive(spec: DriveSpec, t: float) -> float:
    return float(spec.profile(spec.omega * t))


def eval_noise(path: NoisePath, spec: NoiseSpec, drive: DriveSpec, t: float) -> float:
    """Value of q at time ``t``, which must lie in the period of ``path``."""
    M = spec.segments_per_period
    if path.segments != M:
        raise ValueError(f"path has {path.segments} segments, spec expects {M}")
    T = drive.period
    start = path.period_index * T
    if not start <= t < start + T:
        raise ValueError(f"t={t} is outside period {path.period_index} [{start}, {start + T})")
    idx = min(int(math.floor(M * (t - start) / T)), M - 1)
    return path.values[idx]
