"""Spatially inhomogeneous noise on a circle of length L with a UV cutoff.

Retained modes are k_j = 2*pi*j/L with |k_j| <= Lambda, in the real basis
``1, sqrt2 cos(k_1 x), sqrt2 sin(k_1 x), sqrt2 cos(k_2 x), ...`` (orthonormal for
the spatial mean).  The noise field q(x, t) is expanded on the same basis;
each coefficient is an independent piecewise-constant process with amplitude
``sigma / sqrt(n)`` so the spatial variance of q does not depend on n.  The
mode equations read

    chi_i'' + (k_i^2 + m_chi^2 + p(wt)) chi_i + sum_j V_ij(t) chi_j = 0,
    V_ij = sum_c a_c(t) <e_i e_c e_j>,

which is block diagonal when the noise vanishes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .coeffs import DriveSpec, NoiseSpec, derive_seed, initial_vector, sample_noise_block
from .monodromy import IntegratorCfg, IntegrationError, noiseless_exponent
from .randprod import NORMS, LyapunovEstimate, batch_estimate

MODE_CAP = 257


@dataclass(frozen=True, eq=False)
class LatticeSystem:
    L: float
    Lambda: float
    m_chi: float
    drive: DriveSpec
    noise: NoiseSpec
    wavenumbers: np.ndarray     # signed: +k for cosine, -k for sine partners, 0 first
    omega2: np.ndarray
    coupling: np.ndarray        # (C, n, n) triple products <e_i e_c e_j>
    coefficient_scale: np.ndarray

    @property
    def n(self) -> int:
        return self.omega2.size

    @property
    def dim(self) -> int:
        return 2 * self.n

    def noise_coefficients(self, start: int, count: int) -> np.ndarray:
        """Field coefficients a_c for a block of periods, shape (count, M, C)."""
        raw = sample_noise_block(self.noise, start, count, n_coefficients=self.coupling.shape[0])
        return raw * self.coefficient_scale

    def coupling_matrix(self, coefficients) -> np.ndarray:
        """V for one set of field coefficients."""
        return np.tensordot(np.asarray(coefficients, dtype=float), self.coupling, axes=1)


def retained_wavenumbers(L: float, Lambda: float) -> np.ndarray:
    K = int(math.floor(Lambda * L / (2.0 * math.pi)))
    ks = [0.0]
    for j in range(1, K + 1):
        k = 2.0 * math.pi * j / L
        ks += [k, -k]
    return np.array(ks)


def _basis(wavenumbers, x):
    rows = []
    for k in wavenumbers:
        if k == 0:
            rows.append(np.ones_like(x))
        elif k > 0:
            rows.append(math.sqrt(2.0) * np.cos(k * x))
        else:
            rows.append(math.sqrt(2.0) * np.sin(-k * x))
    return np.array(rows)


def triple_products(L: float, wavenumbers) -> np.ndarray:
    """<e_c e_i e_j> over the circle, exact by equispaced quadrature.

    The integrand is a trigonometric polynomial of degree at most 3K, which a
    uniform grid of more than 3K points integrates exactly.
    """
    K = int(round(np.max(np.abs(wavenumbers)) * L / (2.0 * math.pi))) if len(wavenumbers) > 1 else 0
    nx = 4 * K + 4
    x = L * np.arange(nx) / nx
    e = _basis(wavenumbers, x)
    G = np.einsum("cx,ix,jx->cij", e, e, e) / nx
    G[np.abs(G) < 1e-14] = 0.0
    # exact symmetry in all three indices
    return (G + G.transpose(0, 2, 1)) / 2.0


def build_lattice_system(L: float, Lambda: float, drive: DriveSpec, m_chi: float = 0.0,
                         noise: NoiseSpec | None = None, homogeneous: bool = False,
                         mode_cap: int = MODE_CAP) -> LatticeSystem:
    """Cutoff Fourier representation of the inhomogeneous-noise problem.

    With ``homogeneous=True`` only the zero Fourier coefficient of the field is
    active (at full amplitude sigma), so modes do not mix.
    """
    if not (L > 0 and Lambda > 0):
        raise ValueError("L and Lambda must be positive")
    K = int(math.floor(Lambda * L / (2.0 * math.pi)))
    n = 2 * K + 1
    if n > mode_cap:
        max_lambda = 2.0 * math.pi * ((mode_cap - 1) // 2 + 1) / L
        raise ValueError(f"{n} retained modes exceeds the cap of {mode_cap}; "
                         f"use Lambda < {max_lambda:.6g} for L={L} or raise mode_cap")
    noise = noise or NoiseSpec()
    ks = retained_wavenumbers(L, Lambda)
    omega2 = ks**2 + m_chi**2
    G = triple_products(L, ks)
    if homogeneous:
        G = G[:1]
        scale = np.ones(1)
    else:
        scale = np.full(n, 1.0 / math.sqrt(n))
    return LatticeSystem(L, Lambda, m_chi, drive, noise, ks, omega2, np.ascontiguousarray(G), scale)


def _setup(sys: LatticeSystem, cfg: IntegratorCfg):
    sps = cfg.steps_per_segment(sys.noise.segments_per_period)
    pvals = sys.drive.half_step_samples(cfg.steps_per_period)
    h = sys.drive.period / cfg.steps_per_period
    return sps, pvals, h


def period_matrix(sys: LatticeSystem, coefficients, cfg: IntegratorCfg | None = None) -> np.ndarray:
    """Explicit 2n x 2n propagator over one period for coefficients of shape (M, C)."""
    cfg = cfg or IntegratorCfg()
    sps, pvals, h = _setup(sys, cfg)
    coeffs = np.ascontiguousarray(coefficients, dtype=float)[None]
    mats, fail = _kernels.period_matrices(sys.omega2, pvals, coeffs, sys.coupling, sps, h)
    if fail[0] >= 0:
        raise IntegrationError(f"non-finite state at step {fail[1]}")
    return mats[0]


def propagate(sys: LatticeSystem, N: int, cfg: IntegratorCfg | None = None, burn_in: int = 0,
              v0=None, norm: str = "l2"):
    """Vector propagation over periods burn_in..burn_in+N-1.

    Returns (increments, pair_log_norms) for the measured periods; the
    pair log-norms are those of the unit state at each period end.
    """
    cfg = cfg or IntegratorCfg()
    kind = NORMS[norm]
    sps, pvals, h = _setup(sys, cfg)
    v = np.array(initial_vector(sys.dim, sys.noise.master_seed) if v0 is None else v0, dtype=float)
    v /= _kernels.vector_norm(v, kind)
    M, C = sys.noise.segments_per_period, sys.coupling.shape[0]
    chunk = max(1, (1 << 22) // (M * C))
    inc = np.empty(N)
    pairs = np.empty((N, sys.n))
    start, stop = 0, burn_in + N
    while start < stop:
        count = min(chunk, stop - start)
        coeffs = np.ascontiguousarray(sys.noise_coefficients(start, count))
        ci, cp, v, bad, step = _kernels.accumulate_vector(sys.omega2, pvals, coeffs, sys.coupling,
                                                          v, sps, h, kind)
        if bad >= 0:
            raise IntegrationError(f"non-finite state in period {start + bad} (step {step})")
        lo = max(start, burn_in)
        if lo < start + count:
            inc[lo - burn_in:start + count - burn_in] = ci[lo - start:]
            pairs[lo - burn_in:start + count - burn_in] = cp[lo - start:]
        start += count
    return inc, pairs


def estimate_lattice_top_exponent(sys: LatticeSystem, N: int, cfg: IntegratorCfg | None = None,
                                  n_batches: int = 10, burn_in: int = 0, v0=None,
                                  norm: str = "l2") -> LyapunovEstimate:
    if N < 100:
        raise ValueError("N must be >= 100")
    inc, _ = propagate(sys, N, cfg, burn_in, v0, norm)
    return batch_estimate(inc, sys.drive.period, n_batches, sys.noise.master_seed)


def projected_mode_exponent(sys: LatticeSystem, mode_index: int, N: int, cfg: IntegratorCfg | None = None,
                            n_batches: int = 10, burn_in: int = 0, v0=None) -> LyapunovEstimate:
    """Growth rate of |(chi_j, chi_j')| for one mode along the full trajectory.

    The restriction to the mode is taken at the end of the evolution: the
    accumulated log-norm plus the log of the pair's share of the unit state.
    Each batch contributes its increments plus the change of that share
    across the batch, so the batch sums telescope to the point estimate.
    """
    if not 0 <= mode_index < sys.n:
        raise IndexError(f"mode_index {mode_index} out of range for {sys.n} modes")
    if N < 100:
        raise ValueError("N must be >= 100")
    v = np.array(initial_vector(sys.dim, sys.noise.master_seed) if v0 is None else v0, dtype=float)
    v /= np.linalg.norm(v)
    start_share = 0.5 * math.log(v[mode_index] ** 2 + v[sys.n + mode_index] ** 2)
    if burn_in:
        _, pairs0 = propagate(sys, burn_in, cfg, 0, v, "l2")
        start_share = pairs0[-1, mode_index]
    inc, pairs = propagate(sys, N, cfg, burn_in, v, "l2")
    share = pairs[:, mode_index]
    adj = inc.copy()
    adj[0] += share[0] - start_share
    adj[1:] += np.diff(share)
    return batch_estimate(adj, sys.drive.period, n_batches, sys.noise.master_seed)


def noiseless_mode_exponents(sys: LatticeSystem, cfg: IntegratorCfg | None = None) -> np.ndarray:
    """Floquet exponent of every retained mode without noise."""
    cache = {}
    out = np.empty(sys.n)
    for i, w2 in enumerate(sys.omega2):
        if w2 not in cache:
            cache[w2] = noiseless_exponent(float(w2), sys.drive, cfg).mu
        out[i] = cache[w2]
    return out


class ScanRow(NamedTuple):
    L: float
    Lambda: float
    n: int
    sigma: float
    N: int
    mu_hat: float
    std_err: float
    mu0_max: float
    seed: int


def scan_cell(L, Lambda, drive, m_chi, noise, N, cfg, homogeneous=False, burn_in=0, n_batches=10) -> ScanRow:
    sys = build_lattice_system(L, Lambda, drive, m_chi, noise, homogeneous)
    est = estimate_lattice_top_exponent(sys, N, cfg, n_batches, burn_in)
    mu0 = float(noiseless_mode_exponents(sys, cfg).max())
    return ScanRow(L, Lambda, sys.n, noise.sigma, N, est.mu_hat, est.std_err, mu0, noise.master_seed)


def cutoff_convergence_scan(L_list, Lambda_list, drive: DriveSpec, m_chi: float, noise: NoiseSpec, N: int,
                            cfg: IntegratorCfg | None = None, homogeneous: bool = False, burn_in: int = 0,
                            n_batches: int = 10, map_fn=map) -> list[ScanRow]:
    """Top-exponent estimates over the (L, Lambda) grid, L outer.

    Cell i uses noise seed ``derive_seed(noise.master_seed, i)``.
    """
    for name, seq in (("L_list", L_list), ("Lambda_list", Lambda_list)):
        if not seq or any(b < a for a, b in zip(seq, seq[1:])):
            raise ValueError(f"{name} must be non-empty and ascending")
    cells = [(L, lam) for L in L_list for lam in Lambda_list]
    jobs = [(L, lam, drive, m_chi, noise.with_seed(derive_seed(noise.master_seed, i)), N, cfg,
             homogeneous, burn_in, n_batches) for i, (L, lam) in enumerate(cells)]
    return list(map_fn(_scan_job, jobs))


def _scan_job(job):
    return scan_cell(*job)
