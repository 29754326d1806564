"""Shared result container for the rate estimators."""

from dataclasses import dataclass, field

import numpy as np


class EstimatorError(ValueError):
    """Estimator input failed validation (too short, uneven, malformed)."""


@dataclass
class EstimateSeries:
    """Per-step rate estimates plus method-specific diagnostics.

    ``times_s`` carries the timestamp of each estimate (window end for
    the periodogram, sample time for the trackers).  ``aux`` holds the
    arrays needed to reconstruct the modeled signal or inspect the
    internal state; keys are method-specific and documented by each
    estimator.
    """

    method: str
    times_s: np.ndarray
    f_hat_hz: np.ndarray
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.times_s) != len(self.f_hat_hz):
            raise ValueError("times_s and f_hat_hz must have equal length")

    def __len__(self):
        return len(self.times_s)

    def after(self, t_s):
        """Estimates with timestamps strictly greater than ``t_s``."""
        mask = self.times_s > t_s
        return self.times_s[mask], self.f_hat_hz[mask]


def reconstruct_signal(series: EstimateSeries, mean_db=0.0):
    """Modeled signal aligned with the estimate timestamps.

    The trackers store their filtered reconstruction directly; the
    periodogram method rebuilds the dominant tone of each window and
    needs the previously subtracted mean added back through
    ``mean_db``.
    """
    if series.method in ("kf", "gp"):
        return series.aux["recon"].copy()
    if series.method == "dft":
        return series.aux["recon"] + mean_db
    raise ValueError(f"cannot reconstruct signal for method {series.method!r}")
