import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquet_noise.coeffs import (DriveSpec, Mode, NoisePath, NoiseSpec, derive_seed, eval_drive, eval_noise,
                                  sample_noise, sample_noise_block)


def test_cosine_drive_values():
    d = DriveSpec(1.0, 2.0)
    assert eval_drive(d, 0.0) == 1.0
    assert abs(eval_drive(d, d.period / 4)) < 1e-12


@pytest.mark.parametrize("drive", [
    DriveSpec(1.0, 2.0),
    DriveSpec(7.5, 0.3),
    DriveSpec(2.0, 1.7, "fourier_series", (1.0, 0.5, -0.25), (0.0, 0.3)),
])
def test_drive_periodicity(drive):
    rng = np.random.default_rng(5)
    for t in rng.uniform(-50, 50, 100):
        diff = abs(eval_drive(drive, t + drive.period) - eval_drive(drive, t))
        assert diff < 1e-12 * max(1.0, abs(drive.amplitude))


def test_fourier_series_matches_definition():
    d = DriveSpec(3.0, 1.0, "fourier_series", (1.0, 0.5), (0.25,))
    th = 0.37
    want = 3.0 * (math.cos(th) + 0.5 * math.cos(2 * th) + 0.25 * math.sin(th))
    assert eval_drive(d, th) == pytest.approx(want, rel=1e-14)


def test_half_step_samples_wrap_exactly():
    vals = DriveSpec(0.7, 3.0).half_step_samples(64)
    assert vals.shape == (129,)
    assert vals[0] == vals[-1]
    assert vals[64] == pytest.approx(-0.7, abs=1e-15)


@pytest.mark.parametrize("kwargs", [dict(omega=0.0), dict(omega=-1.0), dict(shape="square"),
                                    dict(shape="fourier_series")])
def test_drive_rejects_bad_input(kwargs):
    with pytest.raises(ValueError):
        DriveSpec(**kwargs)


def test_mode_omega2():
    assert Mode(3.0, 4.0).omega2 == 25.0
    with pytest.raises(ValueError):
        Mode(-1.0)


def test_noise_is_deterministic():
    spec = NoiseSpec(0.5, master_seed=42)
    assert sample_noise(spec, 7) == sample_noise(spec, 7)
    assert sample_noise(spec, 7) != sample_noise(spec, 8)
    assert sample_noise(spec, 7) != sample_noise(spec.with_seed(43), 7)


def test_block_matches_single_periods_in_any_order():
    spec = NoiseSpec(0.5, "gaussian", 8, master_seed=3)
    block = sample_noise_block(spec, 10, 5)[:, :, 0]
    for i in reversed(range(5)):
        assert tuple(block[i]) == sample_noise(spec, 10 + i).values


def test_extra_coefficients_leave_the_first_untouched():
    spec = NoiseSpec(1.0, master_seed=9)
    one = sample_noise_block(spec, 0, 20, 1)
    many = sample_noise_block(spec, 0, 20, 5)
    assert np.array_equal(one[:, :, 0], many[:, :, 0])


def test_zero_sigma_is_identically_zero():
    for seed in (0, 1, 2**64 - 1):
        path = sample_noise(NoiseSpec(0.0, master_seed=seed), 3)
        assert all(v == 0.0 for v in path.values)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 10.0), st.integers(0, 2**64 - 1), st.integers(0, 10**6), st.integers(1, 32))
def test_uniform_values_in_support(sigma, seed, period, M):
    path = sample_noise(NoiseSpec(sigma, "uniform", M, seed), period)
    assert path.segments == M
    assert max(abs(v) for v in path.values) <= sigma


def test_gaussian_truncation():
    vals = sample_noise_block(NoiseSpec(1.0, "gaussian", 16, 1), 0, 2000)
    assert np.abs(vals).max() <= 6.0


def test_cross_period_correlation():
    # Monte Carlo: lag-1 correlation of segment 0 across 1e4 consecutive periods
    vals = sample_noise_block(NoiseSpec(1.0, master_seed=11), 0, 10_000)[:, :, 0]
    for s in (0, 5, 15):
        rho = np.corrcoef(vals[:-1, s], vals[1:, s])[0, 1]
        assert abs(rho) < 3 / math.sqrt(10_000)
    # and across segments of the same period
    rho = np.corrcoef(vals[:, 0], vals[:, 1])[0, 1]
    assert abs(rho) < 3 / math.sqrt(10_000)


@pytest.mark.parametrize("distribution,var_factor", [("uniform", 1 / 3), ("gaussian", 1.0)])
def test_moments(distribution, var_factor):
    sigma = 0.8
    vals = sample_noise_block(NoiseSpec(sigma, distribution, 100, 2024), 0, 10_000).ravel()
    assert vals.size == 10**6
    assert abs(vals.mean()) < 4 * sigma / math.sqrt(12 * 10**6)
    assert vals.var() == pytest.approx(var_factor * sigma**2, rel=0.05)


def test_derive_seed_stable_and_distinct():
    seeds = [derive_seed(0, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert seeds == [derive_seed(0, i) for i in range(100)]
    assert all(0 <= s < 2**64 for s in seeds)


class TestEvalNoise:
    drive = DriveSpec(0.0, 2.0)

    def test_single_segment_constant(self):
        spec = NoiseSpec(1.0, segments_per_period=1)
        path = sample_noise(spec, 2)
        T = self.drive.period
        for frac in (0.0, 0.3, 0.999):
            assert eval_noise(path, spec, self.drive, (2 + frac) * T) == path.values[0]

    def test_segment_index(self):
        spec = NoiseSpec(1.0, segments_per_period=4)
        path = NoisePath(0, (1.0, 2.0, 3.0, 4.0))
        T = self.drive.period
        assert eval_noise(path, spec, self.drive, 0.5 * T) == 3.0
        assert eval_noise(path, spec, self.drive, 0.55 * T) == eval_noise(path, spec, self.drive, 0.7 * T)

    def test_out_of_period_rejected(self):
        spec = NoiseSpec(1.0, segments_per_period=4)
        path = sample_noise(spec, 1)
        with pytest.raises(ValueError):
            eval_noise(path, spec, self.drive, 0.1)
        with pytest.raises(ValueError):
            eval_noise(path, spec, self.drive, 2 * self.drive.period)
