"""1-D Anderson localization through the time <-> space duality.

psi'' + 2m (E - V_p(wx) - V_R(x)) psi = 0 is the oscillator equation with
omega_k^2 = 2mE, p = -2m V_p and q = -2m V_R, so the spatial Lyapunov
exponent of the transfer-matrix product is the inverse localization length.
All numerics are delegated to :mod:`floquet_noise.randprod`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .coeffs import DriveSpec, NoiseSpec, derive_seed
from .monodromy import IntegratorCfg, noiseless_exponent
from .randprod import LyapunovEstimate, estimate_lyapunov


@dataclass(frozen=True)
class SchrodingerParams:
    """Energy, mass and potentials of H = -psi''/2m + V_p(wx) + V_R(x).

    ``periodic`` carries the amplitude and spatial angular frequency of V_p;
    ``random`` carries the amplitude, segment count, law and seed of V_R.
    """

    energy: float
    periodic: DriveSpec = DriveSpec()
    random: NoiseSpec = NoiseSpec()
    mass: float = 0.5

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")


class OscillatorProblem(NamedTuple):
    omega2: float
    drive: DriveSpec
    noise: NoiseSpec
    evanescent: bool   # 2mE < 0


def map_to_oscillator(sp: SchrodingerParams) -> OscillatorProblem:
    """Exact substitution omega_k^2 = 2mE, p = -2m V_p, q = -2m V_R.

    The sign of q is absorbed by the symmetric noise law, so the noise
    amplitude becomes 2m times the potential amplitude.
    """
    two_m = 2.0 * sp.mass
    vp = sp.periodic
    drive = DriveSpec(-two_m * vp.amplitude, vp.omega, vp.shape, vp.fourier_cos, vp.fourier_sin)
    vr = sp.random
    noise = NoiseSpec(two_m * vr.sigma, vr.distribution, vr.segments_per_period, vr.master_seed)
    omega2 = two_m * sp.energy
    return OscillatorProblem(omega2, drive, noise, omega2 < 0)


def map_from_oscillator(problem: OscillatorProblem, mass: float = 0.5) -> SchrodingerParams:
    two_m = 2.0 * mass
    d, nz = problem.drive, problem.noise
    periodic = DriveSpec(-d.amplitude / two_m, d.omega, d.shape, d.fourier_cos, d.fourier_sin)
    random = NoiseSpec(nz.sigma / two_m, nz.distribution, nz.segments_per_period, nz.master_seed)
    return SchrodingerParams(problem.omega2 / two_m, periodic, random, mass)


@dataclass(frozen=True)
class LocalizationResult:
    mu: float                 # inverse localization length, per unit length
    xi: float | None          # localization length, only when mu is significant
    std_err: float
    estimate: LyapunovEstimate


def localization_length(sp: SchrodingerParams, N: int, cfg: IntegratorCfg | None = None,
                        n_batches: int = 10) -> LocalizationResult:
    """Decay rate of the normalizable solution over N periods of V_p.

    ``mu`` is the raw estimate and can come out marginally negative when the
    true exponent is zero; ``xi`` is reported only when mu - 2*std_err > 0.
    """
    if N < 1000:
        raise ValueError("N must be >= 1000 periods of V_p")
    prob = map_to_oscillator(sp)
    est = estimate_lyapunov(prob.omega2, prob.drive, prob.noise, N, cfg, n_batches=n_batches)
    xi = 1.0 / est.mu_hat if est.mu_hat - 2.0 * est.std_err > 0 else None
    return LocalizationResult(est.mu_hat, xi, est.std_err, est)


class BandRow(NamedTuple):
    E: float
    band_or_gap: str
    mu_noiseless: float
    mu_noisy: float
    std_err: float
    xi: float | None
    seed: int


def band_cell(E: float, template: SchrodingerParams, seed: int, N: int,
              cfg: IntegratorCfg | None = None, n_batches: int = 10) -> BandRow:
    sp = SchrodingerParams(E, template.periodic, template.random.with_seed(seed), template.mass)
    prob = map_to_oscillator(sp)
    fl = noiseless_exponent(prob.omega2, prob.drive, cfg)
    label = "gap" if fl.regime == "hyperbolic" else "band"
    loc = localization_length(sp, N, cfg, n_batches)
    return BandRow(E, label, fl.mu, loc.mu, loc.std_err, loc.xi, seed)


def band_scan(E_grid, template: SchrodingerParams, N: int, cfg: IntegratorCfg | None = None,
              n_batches: int = 10, map_fn=map) -> list[BandRow]:
    """Band/gap label, noiseless exponent and noisy exponent for each energy.

    Energy i uses the random-potential seed ``derive_seed(template seed, i)``.
    Parabolic points (band edges) are labelled ``band``.
    """
    E_grid = [float(e) for e in E_grid]
    if not E_grid or any(b < a for a, b in zip(E_grid, E_grid[1:])):
        raise ValueError("E_grid must be non-empty and ascending")
    base = template.random.master_seed
    jobs = [(E, template, derive_seed(base, i), N, cfg, n_batches) for i, E in enumerate(E_grid)]
    return list(map_fn(_band_job, jobs))


def _band_job(job):
    return band_cell(*job)
