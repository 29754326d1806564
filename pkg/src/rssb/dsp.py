"""Causal preprocessing of raw RSS streams.

Produces the two low-passed signals the estimators consume: ``y`` with
the batch mean removed (for spectral methods) and ``z`` with the DC
level kept (for the state-space trackers).  Filtering is strictly
causal; no zero-phase tricks, so the output is what an online system
would see.
"""

from dataclasses import dataclass

import numpy as np
from scipy import signal

_TEMPLATE_GRID = 4096
_TEMPLATE_SLACK_DB = 1e-6
_DC_GAIN_TOL = 1e-10


class FilterDesignError(ValueError):
    """Requested filter specification cannot be met."""


@dataclass(frozen=True)
class FilterSpec:
    """Low-pass template for breathing signals.

    Defaults follow the reference receiver chain: 5th-order elliptic,
    2 Hz passband with 0.05 dB ripple, 40 dB stopband from 3 Hz.
    """

    order: int = 5
    passband_hz: float = 2.0
    stopband_hz: float = 3.0
    passband_ripple_db: float = 0.05
    stopband_atten_db: float = 40.0

    def __post_init__(self):
        if self.order < 1:
            raise FilterDesignError("order must be at least 1")
        if not 0 < self.passband_hz < self.stopband_hz:
            raise FilterDesignError("need 0 < passband_hz < stopband_hz")
        if self.passband_ripple_db <= 0 or self.stopband_atten_db <= 0:
            raise FilterDesignError("ripple and attenuation must be positive")


def design_lowpass(spec: FilterSpec, sample_rate_hz) -> np.ndarray:
    """Design the elliptic low-pass as second-order sections.

    The returned cascade is checked against the template on a dense
    frequency grid: ripple within the passband, attenuation beyond the
    stopband edge, and unity DC gain.  A spec the order cannot satisfy
    raises FilterDesignError with the achieved numbers.
    """
    if spec.stopband_hz >= sample_rate_hz / 2:
        raise FilterDesignError(
            f"stopband edge {spec.stopband_hz} Hz must be below Nyquist "
            f"{sample_rate_hz / 2} Hz")
    sos = signal.ellip(spec.order, spec.passband_ripple_db,
                       spec.stopband_atten_db, spec.passband_hz,
                       btype="low", fs=sample_rate_hz, output="sos")
    w, h = signal.sosfreqz(sos, worN=_TEMPLATE_GRID, fs=sample_rate_hz)
    mag_db = 20 * np.log10(np.maximum(np.abs(h), 1e-300))
    pass_dev = np.abs(mag_db[w <= spec.passband_hz])
    stop_max = mag_db[w >= spec.stopband_hz].max()
    dc_gain = np.abs(signal.sosfreqz(sos, worN=[0.0], fs=sample_rate_hz)[1][0])
    if (pass_dev.max() > spec.passband_ripple_db + _TEMPLATE_SLACK_DB
            or stop_max > -spec.stopband_atten_db + _TEMPLATE_SLACK_DB
            or abs(dc_gain - 1) > _DC_GAIN_TOL):
        raise FilterDesignError(
            f"order-{spec.order} design misses the template: passband "
            f"deviation {pass_dev.max():.4f} dB, stopband maximum "
            f"{stop_max:.2f} dB, DC gain {dc_gain:.12f}")
    return sos


def preprocess(values, spec: FilterSpec, sample_rate_hz, streaming_mean=False):
    """Low-pass a raw RSS stream into the (y, z) estimator inputs.

    ``z`` is the filtered stream with its DC level intact and ``y``
    the filtered stream after mean removal.  The mean is the batch mean
    by default; ``streaming_mean=True`` subtracts the running mean
    instead, for sample-by-sample operation.  Input samples are
    processed in stream order and assumed close to the nominal rate;
    resample first if the timestamps are materially uneven.

    Returns
    -------
    (y, z) : ndarray pair
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError("values must be a 1-D sample stream")
    if len(values) == 0:
        raise ValueError("values must not be empty")
    sos = design_lowpass(spec, sample_rate_hz)
    z = signal.sosfilt(sos, values)
    if streaming_mean:
        running = np.cumsum(values) / np.arange(1, len(values) + 1)
        y = signal.sosfilt(sos, values - running)
    else:
        y = signal.sosfilt(sos, values - values.mean())
    return y, z


def resample_uniform(times_s, values, sample_rate_hz):
    """Linear interpolation onto a uniform grid spanning the input times.

    Returns the new timestamps and values.  Input timestamps must be
    strictly increasing; duplicates indicate a merged multi-channel
    stream, which must be separated first.
    """
    times_s = np.asarray(times_s, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(times_s) != len(values):
        raise ValueError("times and values must have equal length")
    if len(times_s) < 2:
        raise ValueError("need at least two samples to resample")
    if np.any(np.diff(times_s) <= 0):
        raise ValueError("timestamps must be strictly increasing")
    step = 1.0 / sample_rate_hz
    n = int(np.floor((times_s[-1] - times_s[0]) / step)) + 1
    grid = times_s[0] + step * np.arange(n)
    return grid, np.interp(grid, times_s, values)


def is_uniform(times_s, tol=1e-6):
    """True when successive timestamps are evenly spaced within ``tol``."""
    dt = np.diff(np.asarray(times_s, dtype=float))
    return bool(len(dt) == 0 or np.ptp(dt) <= tol * np.median(dt))
