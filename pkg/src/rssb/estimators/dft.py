"""Sliding-window periodogram rate estimator.

Each window of the mean-removed signal ``y`` is zero-padded to a fixed
DFT length and the breathing rate read off as the frequency of the
largest in-band PSD bin.  No taper is applied; the window advances by
``hop_samples`` (one sample reproduces the reference configuration of
a 30 s window with maximum overlap).
"""

from dataclasses import dataclass

import numpy as np

from ..dsp import is_uniform
from .common import EstimateSeries, EstimatorError


@dataclass(frozen=True)
class DftConfig:
    """Periodogram settings.

    ``window_s`` is converted to samples with ceil(window_s * fs).
    ``band_hz`` restricts the peak search; the DC bin is always
    excluded.  Ties resolve toward the lower frequency.
    """

    n_dft: int = 2048
    window_s: float = 30.0
    hop_samples: int = 1
    band_hz: tuple = (0.1, 1.25)

    def __post_init__(self):
        if self.n_dft < 2:
            raise EstimatorError("n_dft must be at least 2")
        if self.window_s <= 0:
            raise EstimatorError("window_s must be positive")
        if self.hop_samples < 1:
            raise EstimatorError("hop_samples must be at least 1")
        if not 0 < self.band_hz[0] < self.band_hz[1]:
            raise EstimatorError("band_hz must satisfy 0 < low < high")

    def window_samples(self, sample_rate_hz) -> int:
        return int(np.ceil(self.window_s * sample_rate_hz))


def dft_estimate(times_s, y, cfg: DftConfig = DftConfig()) -> EstimateSeries:
    """Estimate the breathing rate in every sliding window of ``y``.

    Parameters
    ----------
    times_s, y : arrays
        Uniformly sampled mean-removed signal.  Uneven timestamps are
        rejected; resample first.
    cfg : DftConfig

    Returns
    -------
    EstimateSeries
        One estimate per window, stamped at the window's last sample.
        ``aux`` carries the spectrogram (``psd``, ``freq_hz``) and the
        per-window dominant-tone reconstruction (``recon``), evaluated
        at the window end.
    """
    times_s = np.asarray(times_s, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(times_s) != len(y):
        raise EstimatorError("times and values must have equal length")
    if len(y) < 2:
        raise EstimatorError("signal too short")
    if not is_uniform(times_s):
        raise EstimatorError(
            "periodogram estimator requires uniform sampling; resample first")
    fs = 1.0 / float(np.median(np.diff(times_s)))
    nw = cfg.window_samples(fs)
    if cfg.n_dft < nw:
        raise EstimatorError(
            f"n_dft ({cfg.n_dft}) must be at least the window length ({nw})")
    if len(y) < nw:
        raise EstimatorError(
            f"signal has {len(y)} samples but one window needs {nw}; "
            "provide a longer trace")

    freqs = np.fft.rfftfreq(cfg.n_dft, d=1.0 / fs)
    band = (freqs >= cfg.band_hz[0]) & (freqs <= cfg.band_hz[1])
    band[0] = False
    if not np.any(band):
        raise EstimatorError("search band contains no DFT bins")
    band_idx = np.flatnonzero(band)

    starts = np.arange(0, len(y) - nw + 1, cfg.hop_samples)
    psd = np.empty((len(starts), len(freqs)))
    f_hat = np.empty(len(starts))
    recon = np.empty(len(starts))
    t_out = np.empty(len(starts))
    for j, s in enumerate(starts):
        seg = y[s:s + nw]
        spec = np.fft.rfft(seg, cfg.n_dft)
        psd[j] = np.abs(spec) ** 2
        peak = band_idx[np.argmax(psd[j, band_idx])]  # first max: lower f wins
        f_hat[j] = freqs[peak]
        amp = 2 * np.abs(spec[peak]) / nw
        phase = np.angle(spec[peak])
        recon[j] = amp * np.cos(2 * np.pi * f_hat[j] * (nw - 1) / fs + phase)
        t_out[j] = times_s[s + nw - 1]

    return EstimateSeries(
        method="dft", times_s=t_out, f_hat_hz=f_hat,
        aux={"psd": psd, "freq_hz": freqs, "recon": recon,
             "window_start_s": times_s[starts], "sample_rate_hz": fs},
    )
