"""Acceptance criteria 1-10.

Each test prints one ``criterion N ... PASS|FAIL`` line with the measured
quantity and wall time, then asserts both the criterion and its time budget.
conftest.py repeats the lines in the terminal summary, so they show up even
when output is captured.

    pytest -v -s tests/test_acceptance.py
"""
import math
import time

import numpy as np
from oracles import explicit_product_lognorm, numerov_decay_rate

from floquet_noise.anderson import SchrodingerParams, localization_length, map_to_oscillator
from floquet_noise.cli import run
from floquet_noise.coeffs import DriveSpec, Mode, NoisePath, NoiseSpec, initial_vector, sample_noise, sample_noise_block
from floquet_noise.config import COMMANDS, parse_config
from floquet_noise.lattice import (build_lattice_system, estimate_lattice_top_exponent, noiseless_mode_exponents,
                                   period_matrix, propagate)
from floquet_noise.monodromy import IntegratorCfg, compute_chart, constant_coefficient_propagator, integrate_period
from floquet_noise.randprod import estimate_lyapunov, furstenberg_estimate, period_log_increments, theorem1_test

RESULTS = {}


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def verdict(number, title, ok, detail, clock, budget):
    in_time = clock.elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"criterion {number} {title}: {detail}; {clock.elapsed:.1f}s (budget {budget:g}s) {status}"
    RESULTS[number] = line
    print("\n" + line)
    assert ok, f"criterion {number} not met: {detail}"
    assert in_time, f"criterion {number} over budget: {clock.elapsed:.1f}s"


def test_c01_unimodularity():
    # draws stay in the documented accuracy envelope of the default integrator
    rng = np.random.default_rng(20241)
    worst = 0.0
    with Clock() as clock:
        for i in range(1000):
            omega = rng.uniform(1.0, 3.0)
            drive = DriveSpec(rng.uniform(0.0, 0.5) * omega**2, omega)
            noise = NoiseSpec(rng.uniform(0.0, 0.5) * omega**2, master_seed=i)
            m = integrate_period(Mode(rng.uniform(0.0, 1.2) * omega), drive, sample_noise(noise, int(rng.integers(1000))))
            worst = max(worst, abs(np.linalg.det(m) - 1.0))
    verdict(1, "unimodularity", worst < 1e-9, f"max |det - 1| = {worst:.2e} over 1000 draws", clock, 10)


def test_c02_constant_coefficient_oracle():
    rng = np.random.default_rng(20242)
    worst = 0.0
    with Clock() as clock:
        for i in range(100):
            omega = rng.uniform(1.0, 3.0)
            c = rng.uniform(0.0, 1.5) * omega**2 if i % 2 == 0 else -rng.uniform(0.0, 0.25) * omega**2
            drive = DriveSpec(0.0, omega)
            got = integrate_period(0.0, drive, NoisePath(0, (c,) * 16))
            worst = max(worst, np.abs(got - constant_coefficient_propagator(c, drive.period)).max())
    verdict(2, "constant-coefficient oracle", worst < 1e-8, f"max elementwise error = {worst:.2e}", clock, 5)


def test_c03_first_tongue_location():
    omega = 2.0
    ks = np.linspace(0.5, 1.5, 400)
    with Clock() as clock:
        rows = compute_chart(ks, [0.1 * omega**2], DriveSpec(0.0, omega))
        unstable = np.array([r.mu > 0 for r in rows])
        centre = int(np.argmin(np.abs(ks - omega / 2)))
        lo = hi = centre
        while unstable[centre] and lo > 0 and unstable[lo - 1]:
            lo -= 1
        while unstable[centre] and hi < len(ks) - 1 and unstable[hi + 1]:
            hi += 1
        mid = 0.5 * (ks[lo] + ks[hi])
    ok = bool(unstable[centre]) and ks[lo] <= 1.0 <= ks[hi] and abs(mid - 1.0) < 0.05
    verdict(3, "Mathieu tongue location", ok,
            f"unstable k in [{ks[lo]:.4f}, {ks[hi]:.4f}], midpoint {mid:.4f}", clock, 30)


def test_c04_broad_band():
    omega = 2.0
    ks = np.linspace(0.0, omega / 2, 202)[1:-1]
    with Clock() as clock:
        rows = compute_chart(ks, [10 * omega**2], DriveSpec(0.0, omega))
        frac = float(np.mean([r.mu > 0 for r in rows]))
    verdict(4, "broad-band regime", frac >= 0.9, f"{frac:.1%} of {ks.size} modes in (0, omega/2) unstable",
            clock, 30)


STABLE_POINT = dict(mode=Mode(1.5), drive=DriveSpec(0.2, 2.0))


def test_c05_theorem1_stable_band():
    with Clock() as clock:
        rep = theorem1_test(STABLE_POINT["mode"], STABLE_POINT["drive"], NoiseSpec(0.5), 10_000, n_seeds=20)
    ok = rep.mu0 == 0.0 and rep.ci_low > 0
    verdict(5, "Theorem 1 at a stable-band point", ok,
            f"mu0 = {rep.mu0}, mean mu(q) = {rep.mean_muq:.3e}, 95% lower bound = {rep.ci_low:.3e}", clock, 120)


def test_c06_furstenberg_decomposition():
    noise = NoiseSpec(0.5)
    with Clock() as clock:
        f = furstenberg_estimate(STABLE_POINT["mode"], STABLE_POINT["drive"], noise, 10_000)
        est = estimate_lyapunov(STABLE_POINT["mode"], STABLE_POINT["drive"], noise, 10_000)
    gap = abs(f.mu0 + f.rate - est.mu_hat)
    tol = 2 * math.hypot(f.std_err, est.std_err)
    verdict(6, "Furstenberg decomposition", gap < tol,
            f"mu0 + lambda/T = {f.mu0 + f.rate:.3e} vs mu_hat = {est.mu_hat:.3e}, |diff| {gap:.1e} < {tol:.1e}"
            f" ({f.route} route)", clock, 120)


def test_c07_lattice_reduction():
    drive = DriveSpec(0.2, 2.0)
    N, burn_in = 10_000, 300
    with Clock() as clock:
        quiet = build_lattice_system(2 * math.pi, 3.5, drive, 1.0, NoiseSpec(0.0))
        mu_modes = noiseless_mode_exponents(quiet)
        top0 = estimate_lattice_top_exponent(quiet, N, burn_in=burn_in)
        noisy = build_lattice_system(2 * math.pi, 3.5, drive, 1.0, NoiseSpec(0.5))
        topq = estimate_lattice_top_exponent(noisy, N, burn_in=burn_in)
    one_resonant = quiet.n == 7 and np.count_nonzero(mu_modes) == 1
    mu_max = float(mu_modes.max())
    zero_ok = abs(top0.mu_hat - mu_max) < 1e-6
    strict_ok = topq.mu_hat - mu_max > 2 * topq.std_err
    verdict(7, "lattice noiseless reduction", one_resonant and zero_ok and strict_ok,
            f"zero noise |top - mu_max| = {abs(top0.mu_hat - mu_max):.1e}; sigma 0.5: top = {topq.mu_hat:.6f}"
            f" +- {topq.std_err:.1e} vs mu_max = {mu_max:.6f}", clock, 300)


def test_c08_anderson_positivity():
    sp = SchrodingerParams(0.8, DriveSpec(1.0, 1.0), NoiseSpec(0.3, segments_per_period=4))
    N = 20_000
    with Clock() as clock:
        prob = map_to_oscillator(sp)
        regime = compute_chart([math.sqrt(prob.omega2)], [prob.drive.amplitude], prob.drive)[0].regime
        res = localization_length(sp, N)
        q = sample_noise_block(prob.noise, 0, N)[:, :, 0]
        rate = numerov_decay_rate(prob.omega2, prob.drive.amplitude, prob.drive.omega, q)
    rel = abs(res.mu - rate) / rate
    ok = regime == "elliptic" and res.mu - 2 * res.std_err > 0 and rel < 0.10
    verdict(8, "Anderson positivity", ok,
            f"E in band ({regime}), mu = {res.mu:.5f} +- {res.std_err:.1e}, envelope fit {rate:.5f}"
            f" ({rel:.1%})", clock, 120)


def test_c09_small_n_product_oracle():
    drive = DriveSpec(0.2, 2.0)
    worst = 0.0
    with Clock() as clock:
        for mode in (Mode(1.0), Mode(1.5)):
            noise = NoiseSpec(0.5, master_seed=9)
            for N in range(1, 7):
                v0 = initial_vector(2, N)
                inc, _ = period_log_increments(mode, drive, noise, N, IntegratorCfg(), v0)
                mats = [integrate_period(mode, drive, sample_noise(noise, j)) for j in range(N)]
                worst = max(worst, abs(inc.sum() - explicit_product_lognorm(mats, v0)))
        for Lam in (0.5, 1.5):
            sys = build_lattice_system(2 * math.pi, Lam, drive, 1.0, NoiseSpec(0.5, master_seed=9))
            for N in range(1, 7):
                v0 = initial_vector(sys.dim, N)
                inc, _ = propagate(sys, N, v0=v0)
                mats = [period_matrix(sys, c) for c in sys.noise_coefficients(0, N)]
                worst = max(worst, abs(inc.sum() - explicit_product_lognorm(mats, v0)))
    verdict(9, "small-N product oracle", worst < 1e-9,
            f"max |renormalized - explicit| = {worst:.1e} (2x2 and 2n x 2n, n <= 3, N <= 6)", clock, 5)


def test_c10_determinism(tmp_path):
    mismatched = []
    with Clock() as clock:
        for command in COMMANDS:
            blobs = []
            for i, workers in enumerate((1, 1, 2)):
                cfg = parse_config("{}", command).model_copy(update={"n_workers": workers})
                out = tmp_path / f"{command}-{i}.csv"
                assert run(cfg, str(out)) == 0
                blobs.append(out.read_bytes())
            if not blobs[0] == blobs[1] == blobs[2]:
                mismatched.append(command)
    verdict(10, "determinism", not mismatched,
            f"{len(COMMANDS)} default configs x (rerun, 2 workers); mismatched: {mismatched or 'none'}", clock, 60)
