"""Quasi-periodic frequency tracker checks."""

import numpy as np
import pytest

from rssb.estimators import (EstimatorError, GpConfig, gp_estimate,
                             kernel_cosine_truncation, kernel_cosine_weights,
                             kf_estimate, periodic_kernel)

FS = 31.25


def harmonic_signal(f_hz, duration_s, amps, phases, dc=0.0):
    t = np.arange(int(duration_s * FS)) / FS
    z = np.full(len(t), dc)
    for n, (a, ph) in enumerate(zip(amps, phases), start=1):
        z = z + a * np.cos(2 * np.pi * n * f_hz * t + ph)
    return t, z


def test_kernel_weights_sum_to_variance_at_zero_lag():
    kernel_var, ell = 0.01, 0.9
    assert periodic_kernel(0.0, kernel_var, ell, 0.25) == pytest.approx(
        kernel_var)
    q0, qn = kernel_cosine_weights(kernel_var, ell, 40)
    assert q0 + qn.sum() == pytest.approx(kernel_var, abs=1e-12)
    assert q0 > 0 and np.all(qn > 0)
    assert np.all(np.diff(qn) < 0)


def test_kernel_truncation_error_decreases_with_order():
    errs = [kernel_cosine_truncation(0.01, 0.9, 0.25, n)
            for n in range(1, 7)]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    assert errs[-1] < errs[0]


def test_self_consistency_on_in_model_signal():
    f = 0.25
    t, z = harmonic_signal(f, 90.0, amps=(0.8, 0.2), phases=(0.3, -1.0),
                           dc=0.5)
    cfg = GpConfig(meas_var=1e-4)
    series = gp_estimate(t, z, cfg)
    assert abs(series.f_hat_hz[-1] - f) * 60 < 0.5
    late = series.times_s > 60.0
    recon_err = np.mean(np.abs(z[late] - series.aux["recon"][late]))
    assert recon_err < 0.02
    assert np.allclose(series.aux["dc"][late], 0.5, atol=0.05)


def test_lower_measurement_noise_tightens_reconstruction():
    f = 0.2
    t, z = harmonic_signal(f, 60.0, amps=(1.0, 0.3), phases=(0.0, 0.7))
    errs = []
    for meas_var in (1.0, 1e-2, 1e-4):
        series = gp_estimate(t, z, GpConfig(meas_var=meas_var))
        late = series.times_s > 40.0
        errs.append(np.mean(np.abs(z[late] - series.aux["recon"][late])))
    assert errs[0] > errs[1] > errs[2]


def test_harmonic_blocks_capture_amplitude_ratio():
    # amplitude ratio 0.36 -> tracked energy ratio about 0.36**2 = 0.13
    f = 0.2
    t, z = harmonic_signal(f, 90.0, amps=(1.0, 0.36), phases=(0.4, 1.1))
    rng = np.random.default_rng(0)
    z = z + rng.normal(0, 0.05, len(z))
    series = gp_estimate(t, z, GpConfig())
    harm = series.aux["harmonic_cos"]
    late = series.times_s > 30.0
    energies = np.mean(harm[late] ** 2, axis=0)
    assert energies[1] / energies[0] == pytest.approx(0.13, abs=0.04)


def test_missing_samples_degrade_gracefully():
    # both trackers must absorb 10% random drops with <0.5 bpm penalty
    f = 12 / 60
    t, z = harmonic_signal(f, 60.0, amps=(1.0, 0.1), phases=(0.0, 0.5))
    rng = np.random.default_rng(21)
    z = z + rng.normal(0, 0.3, len(z))
    keep = rng.random(len(t)) >= 0.1
    for estimate in (gp_estimate, kf_estimate):
        full = estimate(t, z)
        gappy = estimate(t[keep], z[keep])
        def late_mae(series):
            _, f_hat = series.after(30.0)
            return np.mean(np.abs(f_hat - f)) * 60
        assert late_mae(gappy) - late_mae(full) < 0.5


def test_determinism():
    t, z = harmonic_signal(0.25, 40.0, amps=(1.0,), phases=(0.2,))
    a, b = gp_estimate(t, z), gp_estimate(t, z)
    assert np.array_equal(a.f_hat_hz, b.f_hat_hz)
    assert np.array_equal(a.aux["recon"], b.aux["recon"])


def test_aux_contents():
    t, z = harmonic_signal(0.25, 40.0, amps=(1.0,), phases=(0.2,))
    series = gp_estimate(t, z, GpConfig(n_harmonics=3))
    assert series.method == "gp"
    assert series.aux["harmonic_cos"].shape == (len(z), 3)
    assert series.aux["recondition_count"] >= 0
    assert series.aux["final_state"].shape == (1 + 1 + 2 * 3,)
    assert np.all(series.f_hat_hz > 0)


def test_input_validation():
    t = np.arange(10) / FS
    with pytest.raises(EstimatorError):
        gp_estimate(t, np.zeros(9))
    with pytest.raises(EstimatorError):
        gp_estimate([], [])
    with pytest.raises(EstimatorError, match="finite"):
        gp_estimate(t, np.r_[np.zeros(9), np.inf])
    with pytest.raises(EstimatorError):
        GpConfig(n_harmonics=0)
    with pytest.raises(EstimatorError):
        GpConfig(kernel_var=0.0)
    with pytest.raises(EstimatorError):
        GpConfig(freq_drift=-1.0)
