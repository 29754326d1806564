"""Breathing-rate sensing from received signal strength.

The package models how a periodically moving reflector modulates the
RSS of a static radio link, simulates measurement traces and estimates
the motion rate with three trackers (periodogram peak, harmonic Kalman
filter, Gaussian-process frequency tracker).
"""

from .dsp import FilterDesignError, FilterSpec, design_lowpass, is_uniform, preprocess, resample_uniform
from .estimators import (DftConfig, EstimateSeries, EstimatorError, GpConfig,
                         KfConfig, dft_estimate, gp_estimate, kf_estimate,
                         kernel_cosine_truncation, kernel_cosine_weights,
                         periodic_kernel, reconstruct_signal)
from .evaluation import (MetricsReport, compute_metrics, convergence_time_s,
                         freq_mae_bpm, harmonic_energy_fractions,
                         hit_ratio_pct, modeling_mae_db, noise_std_for_snr,
                         snr_estimate, snr_sweep)
from .geometry import (C_LIGHT, DegenerateGeometryError, LinkGeometry,
                       MediumParams, ReflectorMotion, effective_reflection,
                       excess_path, fresnel_coefficient, gradient_projection,
                       incidence_cosine)
from .presets import (
    PRESETS,
    bed_scenario,
    drifting_scenario,
    example_scenario_path,
    midline_scenario,
    preset_scenario,
    second_harmonic_scenario,
)
from .rss_model import (HarmonicModel, MovingHarmonics, ReflectionState,
                        carson_truncation, linear_harmonics,
                        log_series_coefficients, log_harmonics,
                        moving_harmonics, ratio_db_exact, ratio_exact,
                        reflection_state, signal_energy_approx,
                        signal_energy_total)
from .simulator import (RssTrace, ScenarioConfig, ScenarioError,
                        default_channels_hz, load_scenario, save_scenario,
                        scenario_from_dict, scenario_to_dict, synthesize,
                        to_absolute)

__version__ = "0.1.0"

__all__ = [
    "C_LIGHT",
    "DegenerateGeometryError",
    "DftConfig",
    "EstimateSeries",
    "EstimatorError",
    "FilterDesignError",
    "FilterSpec",
    "GpConfig",
    "HarmonicModel",
    "KfConfig",
    "LinkGeometry",
    "MediumParams",
    "MetricsReport",
    "MovingHarmonics",
    "PRESETS",
    "ReflectionState",
    "ReflectorMotion",
    "RssTrace",
    "ScenarioConfig",
    "ScenarioError",
    "bed_scenario",
    "carson_truncation",
    "compute_metrics",
    "convergence_time_s",
    "default_channels_hz",
    "design_lowpass",
    "dft_estimate",
    "drifting_scenario",
    "effective_reflection",
    "excess_path",
    "freq_mae_bpm",
    "fresnel_coefficient",
    "gp_estimate",
    "gradient_projection",
    "harmonic_energy_fractions",
    "hit_ratio_pct",
    "incidence_cosine",
    "is_uniform",
    "kernel_cosine_truncation",
    "kernel_cosine_weights",
    "kf_estimate",
    "linear_harmonics",
    "load_scenario",
    "log_harmonics",
    "log_series_coefficients",
    "midline_scenario",
    "modeling_mae_db",
    "moving_harmonics",
    "noise_std_for_snr",
    "periodic_kernel",
    "preprocess",
    "example_scenario_path",
    "preset_scenario",
    "ratio_db_exact",
    "ratio_exact",
    "reconstruct_signal",
    "reflection_state",
    "resample_uniform",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "second_harmonic_scenario",
    "signal_energy_approx",
    "signal_energy_total",
    "snr_estimate",
    "snr_sweep",
    "synthesize",
    "to_absolute",
]
