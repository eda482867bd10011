"""
Splitting the exponent into noiseless part plus a noise contribution
=====================================================================

With Phi_q = Phi_0 Psi_q per period, mu(q) = mu(0) + lambda / T, where lambda
is the growth rate of a matrix element of the product of reduced matrices.
"""
import numpy as np

from floquet_noise import DriveSpec, Mode, NoiseSpec, estimate_lyapunov, furstenberg_estimate, reduced_matrix
from floquet_noise.coeffs import sample_noise

drive = DriveSpec(0.2, 2.0)
noise = NoiseSpec(0.5, master_seed=3)

psi = reduced_matrix(Mode(1.5), drive, sample_noise(noise, 0))
print("one reduced matrix:\n", np.round(psi, 4), "\ndet =", np.linalg.det(psi))

for mode in (Mode(1.5), Mode(1.0)):
    f = furstenberg_estimate(mode, drive, noise, 10_000)
    est = estimate_lyapunov(mode, drive, noise, 10_000)
    print(f"omega_k = {mode.k}: mu(0) + lambda/T = {f.mu0 + f.rate:.5f} +- {f.std_err:.1e} ({f.route} route), "
          f"direct mu(q) = {est.mu_hat:.5f} +- {est.std_err:.1e}")

# lambda does not depend on the starting vector
rng = np.random.default_rng(0)
rates = [furstenberg_estimate(Mode(1.5), drive, noise, 5000, v2=rng.normal(size=2)).rate for _ in range(5)]
print("five random v2:", np.round(rates, 6))
