"""One-period transfer matrices of x'' + (omega_k^2 + p(wt) + q(t)) x = 0 and their Floquet data."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .coeffs import DriveSpec, Mode, NoisePath, omega_squared

PARABOLIC_EPS = 1e-10
DET_TOL = 1e-6

_SINGLE_MODE = np.ones((1, 1, 1))


class IntegrationError(ArithmeticError):
    """The state became non-finite during integration."""


@dataclass(frozen=True)
class IntegratorCfg:
    steps_per_period: int = 512
    method: str = "rk4"

    def __post_init__(self):
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")
        if int(self.steps_per_period) < 16:
            raise ValueError("steps_per_period must be >= 16")
        object.__setattr__(self, "steps_per_period", int(self.steps_per_period))

    def steps_per_segment(self, segments: int) -> int:
        if self.steps_per_period % segments:
            raise ValueError(
                f"steps_per_period={self.steps_per_period} is not a multiple of "
                f"the {segments} noise segments per period")
        return self.steps_per_period // segments

    def refined(self, factor: int = 2) -> "IntegratorCfg":
        return IntegratorCfg(self.steps_per_period * factor, self.method)


class FloquetResult(NamedTuple):
    mu: float
    alpha: float
    regime: str


def _raise_failure(fail, what="period"):
    period, step = fail
    if period >= 0:
        raise IntegrationError(f"non-finite state in {what} {period} at step {step}")


def integrate_periods(mode, drive: DriveSpec, noise_values, cfg: IntegratorCfg | None = None) -> np.ndarray:
    """Transfer matrices for a stack of periods.

    ``noise_values`` has shape (N, M); returns an (N, 2, 2) array whose j-th
    entry maps (x, x') at the start of period j to its end.
    """
    cfg = cfg or IntegratorCfg()
    q = np.ascontiguousarray(noise_values, dtype=float)
    if q.ndim != 2:
        raise ValueError("noise_values must be 2-D (periods, segments)")
    sps = cfg.steps_per_segment(q.shape[1])
    omega2 = np.array([omega_squared(mode)])
    pvals = drive.half_step_samples(cfg.steps_per_period)
    h = drive.period / cfg.steps_per_period
    mats, fail = _kernels.period_matrices(omega2, pvals, q[:, :, None], _SINGLE_MODE, sps, h)
    _raise_failure(fail)
    return mats


def integrate_period(mode, drive: DriveSpec, path: NoisePath | None = None,
                     cfg: IntegratorCfg | None = None) -> np.ndarray:
    """Phi(T, 0) from identity initial data, as a 2x2 array.

    Column 0 is (phi_1, phi_1') and column 1 is (phi_2, phi_2').  Without a
    path the noise is zero.
    """
    values = [[0.0]] if path is None else [path.values]
    return integrate_periods(mode, drive, values, cfg)[0]


def floquet_from_monodromy(m, T: float) -> FloquetResult:
    """Growth rate and rotation number of a unimodular monodromy matrix.

    Rates are per unit time.  ``alpha`` is the principal branch in [0, pi/T].
    """
    m = np.asarray(m, dtype=float)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if not abs(det - 1.0) <= DET_TOL:
        raise ValueError(f"monodromy determinant {det!r} is not 1 within {DET_TOL}")
    tr = m[0, 0] + m[1, 1]
    a = abs(tr)
    if a > 2.0 + PARABOLIC_EPS:
        mu = math.acosh(a / 2.0) / T
        return FloquetResult(mu, 0.0 if tr > 0 else math.pi / T, "hyperbolic")
    if a < 2.0 - PARABOLIC_EPS:
        return FloquetResult(0.0, math.acos(tr / 2.0) / T, "elliptic")
    return FloquetResult(0.0, 0.0 if tr > 0 else math.pi / T, "parabolic")


def noiseless_exponent(mode, drive: DriveSpec, cfg: IntegratorCfg | None = None) -> FloquetResult:
    return floquet_from_monodromy(integrate_period(mode, drive, None, cfg), drive.period)


class ChartRow(NamedTuple):
    k: float
    P: float
    mu: float
    alpha: float
    regime: str


def _check_grid(name, grid):
    grid = [float(g) for g in grid]
    if not grid:
        raise ValueError(f"{name} must be non-empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"{name} must be sorted ascending")
    return grid


def chart_cell(k: float, P: float, drive_template: DriveSpec, m_chi: float,
               cfg: IntegratorCfg | None = None) -> ChartRow:
    drive = DriveSpec(P, drive_template.omega, drive_template.shape,
                      drive_template.fourier_cos, drive_template.fourier_sin)
    res = noiseless_exponent(Mode(k, m_chi), drive, cfg)
    return ChartRow(k, P, res.mu, res.alpha, res.regime)


def compute_chart(k_grid, P_grid, drive_template: DriveSpec, mode_template: Mode | None = None,
                  cfg: IntegratorCfg | None = None) -> list[ChartRow]:
    """Noiseless Floquet exponents over a (P, k) grid.

    Rows are ordered with P as the outer loop and k as the inner loop.  Only
    the amplitude of ``drive_template`` and the mass of ``mode_template`` are
    taken from the templates.
    """
    k_grid = _check_grid("k_grid", k_grid)
    P_grid = _check_grid("P_grid", P_grid)
    m_chi = mode_template.m_chi if mode_template is not None else 0.0
    return [chart_cell(k, P, drive_template, m_chi, cfg) for P in P_grid for k in k_grid]


def constant_coefficient_propagator(c: float, t: float) -> np.ndarray:
    """Closed-form propagator of x'' + c x = 0 over time t, for either sign of c."""
    if c > 0:
        w = math.sqrt(c)
        cs, sn = math.cos(w * t), math.sin(w * t)
        return np.array([[cs, sn / w], [-w * sn, cs]])
    if c < 0:
        g = math.sqrt(-c)
        ch, sh = math.cosh(g * t), math.sinh(g * t)
        return np.array([[ch, sh / g], [g * sh, ch]])
    return np.array([[1.0, t], [0.0, 1.0]])
