"""Parametric resonance with noise: Floquet and Lyapunov exponents of random
transfer-matrix products, and 1-D Anderson localization lengths."""

__version__ = "0.1.0"

from .coeffs import (DriveSpec, Mode, NoisePath, NoiseSpec, derive_seed, eval_drive, eval_noise,
                     sample_noise, sample_noise_block)
from .monodromy import (ChartRow, FloquetResult, IntegrationError, IntegratorCfg, compute_chart,
                        floquet_from_monodromy, integrate_period, integrate_periods, noiseless_exponent)
from .randprod import (FurstenbergEstimate, LyapunovEstimate, Theorem1Report, estimate_lyapunov,
                       furstenberg_estimate, reduced_matrix, theorem1_test)
from .lattice import (LatticeSystem, build_lattice_system, cutoff_convergence_scan,
                      estimate_lattice_top_exponent, projected_mode_exponent)
from .anderson import (LocalizationResult, SchrodingerParams, band_scan, localization_length,
                       map_from_oscillator, map_to_oscillator)
