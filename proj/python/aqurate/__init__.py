"""Stochastic MTJ-driven adaptive sampling: device model, clock generation,
sparse recovery and the closed-loop experiment harness."""

from ._core import (
    AClkTrace,
    ClockConfig,
    DeviceParams,
    ExperimentConfig,
    MeasurementSet,
    SparseSignal,
    __version__,
    area_norm,
    bundled_entries,
    calibrate,
    characterize,
    characterize_analytic,
    cosamp,
    drain_voltage,
    generate_aclk,
    generate_sparse_signal,
    mtj_conductance,
    normalized_error,
    omp,
    output_probability,
    power_norm,
    probability_to_vsr,
    rate_to_probability,
    run_experiment,
    sample_at,
    scaling_report,
    support_size_for_rate,
    transistor_conductance,
    transistor_count,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
