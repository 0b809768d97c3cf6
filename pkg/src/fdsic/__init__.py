"""Baseband simulator for in-band full-duplex transceivers with
reference-receiver digital self-interference cancellation."""

__version__ = "0.1.0"

from .backend import active_backend
from .bounds import CrlbInput, crlb_per_tap, required_samples
from .calibration import CheckResult, run_validation
from .cancellation import (
    CANCELLERS,
    ChannelEstimateSet,
    EstimationError,
    RegressionMatrix,
    RfCancelResult,
    build_regression_matrix,
    digital_cancel,
    ls_estimate,
    rf_cancel,
    run_canceller,
    write_estimates_csv,
)
from .config import EXPERIMENTS, ScenarioConfig, load_config
from .harness import (
    RESULTS_CSV_COLUMNS,
    SinrResult,
    SinrSummary,
    TrialCapture,
    aggregate_sinr,
    measure_sinr,
    occupied_band_edge_hz,
    run_experiment,
    simulate_capture,
    simulate_trial,
    trial_seed,
    write_results_csv,
)
from .impairments import (
    AdcSpec,
    AgcResult,
    AmplifierSpec,
    IqSpec,
    add_thermal_noise,
    agc_and_quantize,
    apply_iq_imbalance,
    apply_pa,
    apply_rx_stage,
    reference_rx_front_end,
)
from .linkbudget import (
    BUDGET_CSV_COLUMNS,
    VARIANTS,
    PowerBudget,
    TransceiverSpec,
    adc_snr_db,
    budget_proposed,
    budget_traditional,
    ideal_sinr_db,
    sweep_budget,
    write_budget_csv,
)
from .waveform import (
    ComplexSignal,
    MimoChannel,
    OfdmConfig,
    convolve,
    draw_si_channel,
    generate_ofdm_frame,
    measure_power,
)

__all__ = [
    "AdcSpec",
    "AgcResult",
    "AmplifierSpec",
    "BUDGET_CSV_COLUMNS",
    "CANCELLERS",
    "CheckResult",
    "ChannelEstimateSet",
    "ComplexSignal",
    "CrlbInput",
    "EXPERIMENTS",
    "EstimationError",
    "IqSpec",
    "MimoChannel",
    "OfdmConfig",
    "PowerBudget",
    "RESULTS_CSV_COLUMNS",
    "RegressionMatrix",
    "RfCancelResult",
    "ScenarioConfig",
    "SinrResult",
    "SinrSummary",
    "TransceiverSpec",
    "TrialCapture",
    "VARIANTS",
    "active_backend",
    "adc_snr_db",
    "add_thermal_noise",
    "agc_and_quantize",
    "aggregate_sinr",
    "apply_iq_imbalance",
    "apply_pa",
    "apply_rx_stage",
    "budget_proposed",
    "budget_traditional",
    "build_regression_matrix",
    "convolve",
    "crlb_per_tap",
    "digital_cancel",
    "draw_si_channel",
    "generate_ofdm_frame",
    "ideal_sinr_db",
    "load_config",
    "ls_estimate",
    "measure_power",
    "measure_sinr",
    "occupied_band_edge_hz",
    "reference_rx_front_end",
    "required_samples",
    "rf_cancel",
    "run_canceller",
    "run_experiment",
    "run_validation",
    "simulate_capture",
    "simulate_trial",
    "sweep_budget",
    "trial_seed",
    "write_budget_csv",
    "write_estimates_csv",
    "write_results_csv",
    "__version__",
]
