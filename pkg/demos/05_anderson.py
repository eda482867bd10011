"""
Anderson localization from the oscillator exponent
==================================================

Reading t as x, psi'' + (E - V_p - V_R) psi = 0 (mass 1/2) is the driven
oscillator.  Inside an allowed band of the periodic potential the states
extend; a weak random potential localizes them with xi = 1 / mu.
"""
import numpy as np

from floquet_noise import DriveSpec, NoiseSpec, SchrodingerParams, band_scan, localization_length

periodic = DriveSpec(1.0, 1.0)   # V_p(x) = cos(x)
clean = SchrodingerParams(0.0, periodic, NoiseSpec(0.0, segments_per_period=4))
dirty = SchrodingerParams(0.0, periodic, NoiseSpec(0.3, segments_per_period=4, master_seed=7))

energies = np.linspace(0.05, 1.6, 12)
for c, d in zip(band_scan(energies, clean, 2000), band_scan(energies, dirty, 2000)):
    xi = f"{d.xi:8.2f}" if d.xi is not None else "     inf"
    print(f"E = {c.E:5.3f} {c.band_or_gap:4s}  mu clean = {c.mu_noiseless:.4f}  mu disordered = "
          f"{d.mu_noisy:.4f} +- {d.std_err:.1e}  xi = {xi}")

# localization length against disorder strength at an in-band energy
for s in (0.1, 0.2, 0.3, 0.5):
    res = localization_length(SchrodingerParams(0.8, periodic, NoiseSpec(s, segments_per_period=4)), 20_000)
    print(f"sigma_R = {s}: xi = {res.xi if res.xi is None else round(res.xi, 1)}")
