"""Kalman-filter rate estimator on a fixed frequency grid.

Models the preprocessed signal ``z`` as a DC term plus one sine/cosine
coefficient pair per grid frequency, all following independent random
walks.  The observation row is built from the actual sample timestamps,
so unevenly spaced or missing samples need no special handling.  The
rate estimate is the grid frequency whose coefficient pair currently
has the largest amplitude.
"""

from dataclasses import dataclass

import numpy as np

from .common import EstimateSeries, EstimatorError


@dataclass(frozen=True)
class KfConfig:
    """Random-walk harmonic filter settings.

    The grid holds ``n_bins`` frequencies uniformly spaced on
    (0, max_freq_hz], i.e. f_n = n * max_freq_hz / n_bins.  The default
    75 bins up to 1.25 Hz give 1 bpm spacing over 1..75 bpm.
    ``amp_floor`` flags steps whose largest amplitude is too small to
    mean anything (a constant input never excites the oscillating
    states).
    """

    n_bins: int = 75
    max_freq_hz: float = 1.25
    process_var: float = 0.01
    meas_var: float = 1.0
    init_cov: float = 1.0
    amp_floor: float = 1e-6

    def __post_init__(self):
        if self.n_bins < 1:
            raise EstimatorError("n_bins must be at least 1")
        if self.max_freq_hz <= 0:
            raise EstimatorError("max_freq_hz must be positive")
        if min(self.process_var, self.meas_var, self.init_cov) <= 0:
            raise EstimatorError("variances must be positive")

    def grid_hz(self):
        n = np.arange(1, self.n_bins + 1)
        return n * self.max_freq_hz / self.n_bins


def kf_estimate(times_s, z, cfg: KfConfig = KfConfig()) -> EstimateSeries:
    """Track Fourier coefficients of ``z`` and report the dominant bin.

    Returns an EstimateSeries with one estimate per sample (after the
    corresponding measurement update).  ``aux`` holds the filtered
    reconstruction (``recon``), the per-step dominant amplitude
    (``peak_amp``), a low-amplitude flag array, the DC history and the
    final coefficient amplitudes per grid frequency.
    """
    times_s = np.asarray(times_s, dtype=float)
    z = np.asarray(z, dtype=float)
    if len(times_s) != len(z):
        raise EstimatorError("times and values must have equal length")
    if len(z) == 0:
        raise EstimatorError("empty input")
    if not np.all(np.isfinite(z)):
        raise EstimatorError("measurements must be finite")
    if np.any(np.diff(times_s) <= 0):
        raise EstimatorError("timestamps must be strictly increasing")

    grid = cfg.grid_hz()
    nb = cfg.n_bins
    dim = 2 * nb + 1

    # Observation rows for all samples at once; column layout is
    # [dc, sin terms, cos terms].
    phase = 2 * np.pi * np.outer(times_s, grid)
    g_all = np.empty((len(z), dim))
    g_all[:, 0] = 1.0
    g_all[:, 1:nb + 1] = np.sin(phase)
    g_all[:, nb + 1:] = np.cos(phase)

    x = np.zeros(dim)
    x[0] = z[0]
    p = np.eye(dim) * cfg.init_cov

    f_hat = np.empty(len(z))
    recon = np.empty(len(z))
    peak_amp = np.empty(len(z))
    dc = np.empty(len(z))
    q = cfg.process_var

    for k in range(len(z)):
        if k > 0:
            p[np.diag_indices_from(p)] += q  # random walk: F = I
        g = g_all[k]
        pg = p @ g
        s = float(g @ pg) + cfg.meas_var
        gain = pg / s
        x = x + gain * (z[k] - float(g @ x))
        p = p - np.outer(gain, pg)
        p = (p + p.T) / 2

        amps = np.hypot(x[1:nb + 1], x[nb + 1:])
        best = int(np.argmax(amps))  # first max: lower f wins
        f_hat[k] = grid[best]
        peak_amp[k] = amps[best]
        recon[k] = float(g @ x)
        dc[k] = x[0]

    return EstimateSeries(
        method="kf", times_s=times_s.copy(), f_hat_hz=f_hat,
        aux={"recon": recon, "peak_amp": peak_amp,
             "low_amplitude": peak_amp < cfg.amp_floor,
             "dc": dc, "grid_hz": grid,
             "final_amplitudes": np.hypot(x[1:nb + 1], x[nb + 1:]),
             "final_state": x, "final_cov": p},
    )
