"""Lyapunov exponents of products of random per-period transfer matrices.

The homogeneous-noise oscillator over period j has transfer matrix
``Phi_j = Phi_q(jT, (j-1)T)``.  Its top exponent is estimated by pushing a unit
vector through the product and renormalizing every period.  The reduced
matrices of the noiseless factorization ``Phi_q = Phi_0 Psi_q`` give a second,
matrix-element route to the same number.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels
from .coeffs import DriveSpec, NoisePath, NoiseSpec, derive_seed, initial_vector, sample_noise_block
from .monodromy import (IntegratorCfg, IntegrationError, floquet_from_monodromy, integrate_period,
                        integrate_periods, noiseless_exponent)

NORMS = {"l2": _kernels.NORM_L2, "max": _kernels.NORM_MAX, "l1": _kernels.NORM_L1}
CHUNK_PERIODS = 4096
EXCEED_TOL = 1e-9


@dataclass(frozen=True)
class LyapunovEstimate:
    mu_hat: float
    std_err: float
    n_periods: int
    n_batches: int
    seed: int


def batch_estimate(increments, period: float, n_batches: int, seed: int,
                   total: float | None = None) -> LyapunovEstimate:
    """Point estimate and batch-means standard error from per-period log growths.

    ``total`` overrides the plain sum for the point estimate (used when a
    boundary term is added at the end of the product).
    """
    inc = np.asarray(increments, dtype=float)
    N = inc.size
    if n_batches < 2 or N % n_batches:
        raise ValueError(f"n_batches={n_batches} must be >= 2 and divide N={N}")
    s = inc.sum() if total is None else total
    means = inc.reshape(n_batches, -1).sum(axis=1) / (N // n_batches * period)
    std_err = float(np.std(means, ddof=1) / math.sqrt(n_batches))
    mu_hat = float(s / (N * period))
    if not math.isfinite(mu_hat):
        raise IntegrationError("non-finite Lyapunov accumulation")
    return LyapunovEstimate(mu_hat, std_err, N, n_batches, seed)


def _check_n(N, n_batches, minimum=100):
    if N < minimum:
        raise ValueError(f"N must be >= {minimum}, got {N}")
    if n_batches < 2 or N % n_batches:
        raise ValueError(f"n_batches={n_batches} must divide N={N}")


def _chunks(start, count, size=CHUNK_PERIODS):
    stop = start + count
    while start < stop:
        yield start, min(size, stop - start)
        start += size


def period_log_increments(mode, drive: DriveSpec, noise: NoiseSpec, N: int, cfg: IntegratorCfg,
                          v0=None, norm: str = "l2", first_period: int = 0):
    """Per-period log growth of a renormalized vector over periods first_period..first_period+N-1.

    Returns (increments, final unit vector).
    """
    kind = NORMS[norm]
    v = np.array(initial_vector(2, noise.master_seed) if v0 is None else v0, dtype=float)
    v = v / _kernels.vector_norm(v, kind)
    out = np.empty(N)
    done = 0
    for start, count in _chunks(first_period, N):
        q = sample_noise_block(noise, start, count)[:, :, 0]
        mats = integrate_periods(mode, drive, q, cfg)
        inc, v, bad = _kernels.accumulate_matrices(mats, v, kind)
        if bad >= 0:
            raise IntegrationError(f"non-finite Lyapunov accumulation at period {start + bad}")
        out[done:done + count] = inc
        done += count
    return out, v


def estimate_lyapunov(mode, drive: DriveSpec, noise: NoiseSpec, N: int,
                      cfg: IntegratorCfg | None = None, n_batches: int = 10, burn_in: int = 0,
                      v0=None, norm: str = "l2", min_periods: int = 100) -> LyapunovEstimate:
    """Top Lyapunov exponent (per unit time) of the random per-period product.

    ``burn_in`` periods are propagated first and discarded; the measured
    periods are ``burn_in .. burn_in+N-1`` of the noise realization.  ``v0``
    defaults to a unit vector seeded from ``noise.master_seed``.
    """
    cfg = cfg or IntegratorCfg()
    _check_n(N, n_batches, min_periods)
    v = v0
    if burn_in:
        _, v = period_log_increments(mode, drive, noise, burn_in, cfg, v0, norm)
    inc, _ = period_log_increments(mode, drive, noise, N, cfg, v, norm, first_period=burn_in)
    return batch_estimate(inc, drive.period, n_batches, noise.master_seed)


def reduced_matrix(mode, drive: DriveSpec, path: NoisePath, cfg: IntegratorCfg | None = None) -> np.ndarray:
    """Psi_q(T, 0) = Phi_0(T, 0)^-1 Phi_q(T, 0)."""
    phi0 = integrate_period(mode, drive, None, cfg)
    phiq = integrate_period(mode, drive, path, cfg)
    return np.linalg.solve(phi0, phiq)


@dataclass(frozen=True)
class FurstenbergEstimate:
    lam: float          # per period
    rate: float         # per unit time, lam / T
    std_err: float      # per unit time
    mu0: float
    route: str
    n_periods: int
    seed: int


def _v1_default(phi0, seed):
    w, vecs = np.linalg.eig(phi0.T)
    i = int(np.argmax(np.abs(w)))
    if abs(w[i].imag) == 0.0:
        v = vecs[:, i].real
        return v / np.linalg.norm(v)
    # elliptic: no real eigenvector, any generic direction will do
    return initial_vector(2, derive_seed(seed, 1))


def furstenberg_estimate(mode, drive: DriveSpec, noise: NoiseSpec, N: int, v1=None, v2=None,
                         cfg: IntegratorCfg | None = None, n_batches: int = 10) -> FurstenbergEstimate:
    """Growth rate of <v1, Psi_N ... Psi_1 v2> for the reduced per-period matrices.

    The factors are the interaction-picture propagators
    ``Psi_j = Phi_0^-(j-1) [Phi_0^-1 Phi_j] Phi_0^(j-1)``, whose product is
    ``Phi_0^-N Phi_q(NT, 0)``.  While the noiseless monodromy is not
    hyperbolic the powers stay bounded and the product is formed explicitly.
    In the hyperbolic case the factors overflow, so ``v1`` is pulled back
    through ``(Phi_0^-1)^t`` instead, which gives the same matrix element.

    ``v1`` defaults to the dominant eigenvector of ``Phi_0(T, 0)^t`` (or a
    seeded direction when that is complex), ``v2`` to a seeded unit vector.
    """
    cfg = cfg or IntegratorCfg()
    _check_n(N, n_batches)
    seed = noise.master_seed
    T = drive.period
    phi0 = integrate_period(mode, drive, None, cfg)
    fl = floquet_from_monodromy(phi0, T)
    v1 = _v1_default(phi0, seed) if v1 is None else np.asarray(v1, dtype=float)
    v2 = initial_vector(2, derive_seed(seed, 2)) if v2 is None else np.asarray(v2, dtype=float)
    if not (np.any(v1) and np.any(v2)):
        raise ValueError("v1 and v2 must be nonzero")
    phi0_inv = np.linalg.inv(phi0)

    if fl.regime != "hyperbolic":
        route = "explicit"
        u = v2 / np.linalg.norm(v2)
        inc = np.empty(N)
        power = np.eye(2)       # Phi_0^(j-1)
        power_inv = np.eye(2)   # Phi_0^-(j-1)
        done = 0
        for start, count in _chunks(0, N):
            q = sample_noise_block(noise, start, count)[:, :, 0]
            reduced = phi0_inv @ integrate_periods(mode, drive, q, cfg)
            factors = np.empty_like(reduced)
            for i in range(count):
                factors[i] = power_inv @ reduced[i] @ power
                power = phi0 @ power
                power_inv = power_inv @ phi0_inv
            chunk_inc, u, bad = _kernels.accumulate_matrices(factors, u, _kernels.NORM_L2)
            if bad >= 0:
                raise IntegrationError(f"non-finite reduced product at period {start + bad}")
            inc[done:done + count] = chunk_inc
            done += count
        boundary = math.log(abs(float(v1 @ u)) / np.linalg.norm(v1))
    else:
        route = "adjoint"
        inc_q, x = period_log_increments(mode, drive, noise, N, cfg, v2 / np.linalg.norm(v2))
        y = v1 / np.linalg.norm(v1)
        back = np.broadcast_to(phi0_inv.T, (N, 2, 2))
        inc_y, y, _ = _kernels.accumulate_matrices(np.ascontiguousarray(back), y, _kernels.NORM_L2)
        inc = inc_q + inc_y
        boundary = math.log(abs(float(y @ x)))
    est = batch_estimate(inc, T, n_batches, seed, total=inc.sum() + boundary)
    return FurstenbergEstimate(est.mu_hat * T, est.mu_hat, est.std_err, fl.mu, route, N, seed)


@dataclass(frozen=True)
class Theorem1Report:
    mu0: float
    mean_muq: float
    ci_low: float
    fraction_exceeding: float
    estimates: tuple[LyapunovEstimate, ...]


def theorem1_test(mode, drive: DriveSpec, noise: NoiseSpec, N: int, n_seeds: int = 20,
                  cfg: IntegratorCfg | None = None, n_batches: int = 10, burn_in: int = 0,
                  confidence: float = 0.95, map_fn=map) -> Theorem1Report:
    """Compare the noisy exponent against the noiseless one over independent seeds.

    Seed i is ``derive_seed(noise.master_seed, i)``.  ``ci_low`` is the
    one-sided Student-t lower bound on the mean noisy exponent.  A seed
    counts as exceeding when its estimate is above mu0 by more than
    ``EXCEED_TOL``, the resolution of the noiseless exponent itself.
    ``map_fn`` lets callers fan the seeds out to a process pool.
    """
    if n_seeds < 20:
        raise ValueError("n_seeds must be >= 20")
    cfg = cfg or IntegratorCfg()
    mu0 = noiseless_exponent(mode, drive, cfg).mu
    jobs = [(mode, drive, noise.with_seed(derive_seed(noise.master_seed, i)), N, cfg, n_batches, burn_in)
            for i in range(n_seeds)]
    ests = tuple(map_fn(_theorem1_cell, jobs))
    mus = np.array([e.mu_hat for e in ests])
    mean = float(mus.mean())
    sem = float(mus.std(ddof=1) / math.sqrt(n_seeds))
    ci_low = mean - float(stats.t.ppf(confidence, n_seeds - 1)) * sem
    frac = float(np.mean(mus > mu0 + EXCEED_TOL))
    return Theorem1Report(mu0, mean, ci_low, frac, ests)


def _theorem1_cell(job):
    mode, drive, noise, N, cfg, n_batches, burn_in = job
    return estimate_lyapunov(mode, drive, noise, N, cfg, n_batches=n_batches, burn_in=burn_in)
