"""End-to-end trial simulation and experiment driver.

One trial builds the full transmit, coupling, and receive chain with
every modeled impairment, runs a digital canceller, and scores the
residual against the known wanted waveform over a held-out evaluation
window. The experiment driver sweeps the grids in a ScenarioConfig and
writes one CSV row per trial.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .cancellation import rf_cancel, run_canceller
from .config import ScenarioConfig
from .impairments import (
    AmplifierSpec,
    IqSpec,
    add_thermal_noise,
    agc_and_quantize,
    apply_iq_imbalance,
    apply_pa,
    apply_rx_stage,
    reference_rx_front_end,
)
from .linkbudget import sweep_budget, write_budget_csv
from .units import dbm_to_watts, watts_to_dbm
from .waveform import (
    ComplexSignal,
    convolve,
    draw_si_channel,
    generate_ofdm_frame,
    measure_power,
)

RESULTS_CSV_COLUMNS = (
    "experiment",
    "variant",
    "p_tx_dbm",
    "n_est",
    "calibrated",
    "trial",
    "seed",
    "sinr_db",
    "warnings",
)

# Estimation window used by the transmit-power sweep; the sample-size
# sweep takes its window lengths from the configured grid instead.
PTX_SWEEP_N_EST = 10000

SILENT_SINR_DB = float("-inf")


def occupied_band_edge_hz(ofdm) -> float:
    """Outer edge of the occupied spectrum: half a subcarrier beyond
    the outermost data subcarrier."""
    spacing = 1.0 / ofdm.symbol_duration_s
    return (ofdm.n_data / 2 + 0.5) * spacing


def _samples_of(x):
    return np.asarray(getattr(x, "samples", x))


def _band_limit(samples, sample_rate_hz, band_edge_hz):
    freqs = np.fft.fftfreq(len(samples), d=1.0 / sample_rate_hz)
    mask = np.abs(freqs) <= band_edge_hz
    return np.fft.ifft(np.fft.fft(samples) * mask)


def measure_sinr(
    residual,
    soi_reference,
    fit_taps=4,
    band_edge_hz=None,
    cap_db=60.0,
    sample_rate_hz=None,
):
    """Score a cancelled capture against the known wanted waveform.

    Fits ``fit_taps`` lags of ``soi_reference`` to ``residual`` by least
    squares and returns fitted power over remainder power in dB. With
    ``band_edge_hz`` set, both inputs are brick-wall filtered to that
    one-sided band first, so only in-band leftovers count against the
    wanted signal.

    A perfectly silent residual returns ``SILENT_SINR_DB``; a residual
    equal to the reference saturates at ``cap_db``.
    """
    y = _samples_of(residual)
    s = _samples_of(soi_reference)
    if y.shape != s.shape or y.ndim != 1:
        raise ValueError("residual and reference must be 1-D and equal length")
    if fit_taps < 1:
        raise ValueError("fit_taps must be >= 1")
    if len(y) < 2 * fit_taps:
        raise ValueError("capture too short for the requested fit")
    if not np.any(s):
        raise ValueError("wanted-signal reference is silent")
    if band_edge_hz is not None:
        rate = sample_rate_hz
        if rate is None:
            rate = getattr(residual, "sample_rate_hz", None)
        if rate is None:
            rate = getattr(soi_reference, "sample_rate_hz", None)
        if rate is None:
            raise ValueError("band_edge_hz requires a sample rate")
        y = _band_limit(y, rate, band_edge_hz)
        s = _band_limit(s, rate, band_edge_hz)
    if not np.any(y):
        return SILENT_SINR_DB

    columns = [s[fit_taps - 1 - k : len(s) - k] for k in range(fit_taps)]
    basis = np.column_stack(columns)
    window = y[fit_taps - 1 :]
    coeffs, _, _, _ = np.linalg.lstsq(basis, window, rcond=None)
    fitted = basis @ coeffs
    p_fit = float(np.mean(np.abs(fitted) ** 2))
    p_rem = float(np.mean(np.abs(window - fitted) ** 2))
    if p_fit == 0.0:
        return SILENT_SINR_DB
    if p_rem == 0.0:
        return float(cap_db)
    sinr_db = 10.0 * math.log10(p_fit / p_rem)
    return float(min(sinr_db, cap_db))


@dataclass(frozen=True)
class TrialCapture:
    """All per-trial waveforms a canceller needs, post converter."""

    rx: tuple
    refs: tuple
    tx_data: tuple
    soi: tuple
    n_est: int
    n_eval: int
    warnings: tuple


@dataclass(frozen=True)
class SinrResult:
    """Outcome of one canceller on one simulated trial."""

    experiment: str
    variant: str
    p_tx_dbm: float
    n_est: int
    calibrated: bool
    trial: int
    seed: int
    sinr_db: float
    per_rx_sinr_db: tuple
    warnings: tuple


@dataclass(frozen=True)
class SinrSummary:
    """Trial statistics for one grid point and canceller."""

    variant: str
    p_tx_dbm: float
    n_est: int
    calibrated: bool
    mean_sinr_db: float
    std_sinr_db: float
    n_trials: int


def trial_seed(master_seed, grid_index, trial) -> int:
    """Derive the per-trial seed recorded in result rows.

    Each (grid point, trial) pair gets an independent stream; cancellers
    sharing the pair see the identical capture.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=(grid_index, trial))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _spawn_rngs(seed, n_tx, n_rx):
    channel, tx, soi, rx_noise, ref_noise = np.random.SeedSequence(seed).spawn(5)
    return {
        "channel": np.random.default_rng(channel),
        "tx": [np.random.default_rng(s) for s in tx.spawn(n_tx)],
        "soi": [np.random.default_rng(s) for s in soi.spawn(n_rx)],
        "rx_noise": [np.random.default_rng(s) for s in rx_noise.spawn(n_rx)],
        "ref_noise": [np.random.default_rng(s) for s in ref_noise.spawn(n_tx)],
    }


def simulate_capture(cfg: ScenarioConfig, p_tx_dbm, n_est, seed, calibrated) -> TrialCapture:
    """Run the radio chain once and capture every converter output.

    Chain per receiver: coupling channel plus wanted signal, analog
    cancellation, LNA, IQ imbalance, mixer, thermal noise, shared-gain
    VGA, converter. Reference branches tap the amplifier outputs
    through the attenuating front end and reuse the receivers' VGA
    gain. With ``calibrated`` set, the wanted signal is silent during
    the first ``n_est`` samples.
    """
    spec = cfg.transceiver
    ofdm = cfg.ofdm
    if n_est < 1:
        raise ValueError("n_est must be >= 1")
    n_total = n_est + cfg.n_eval
    n_symbols = -(-n_total // ofdm.samples_per_symbol)
    rate = ofdm.sample_rate_hz
    rngs = _spawn_rngs(seed, spec.n_tx, spec.n_rx)
    warnings = []

    tx_iq = IqSpec(spec.irr_tx_db)
    rx_iq = IqSpec(spec.irr_rx_db)
    tx_data, pa_out = [], []
    for j in range(spec.n_tx):
        frame = generate_ofdm_frame(
            ofdm, n_symbols, p_tx_dbm - spec.pa.gain_db, rngs["tx"][j]
        )
        frame = frame.with_samples(frame.samples[:n_total])
        tx_data.append(frame)
        pa_out.append(apply_pa(apply_iq_imbalance(frame, tx_iq), spec.pa))

    channel = draw_si_channel(
        spec.n_rx,
        spec.n_tx,
        cfg.channel_taps,
        cfg.k_factor_db,
        cfg.los_delay,
        spec.a_ant_db,
        rngs["channel"],
        sample_rate_hz=rate,
    )

    # Noise is injected once per branch at the mixer output, scaled to
    # the cascade referred to the branch input.
    nf_main = spec.f_rx_db + spec.lna.gain_db + spec.mixer.gain_db
    nf_ref = spec.mixer.nf_db + spec.mixer.gain_db

    post_mixer, soi_clean = [], []
    for i in range(spec.n_rx):
        coupled = np.zeros(n_total, dtype=np.complex128)
        for j in range(spec.n_tx):
            coupled += convolve(pa_out[j], channel.response(i, j)).samples
        soi_frame = generate_ofdm_frame(
            ofdm, n_symbols, spec.p_soi_in_dbm, rngs["soi"][i]
        )
        soi_samples = soi_frame.samples[:n_total].copy()
        if calibrated:
            soi_samples[:n_est] = 0.0
        soi_clean.append(ComplexSignal(soi_samples, rate))

        antenna = ComplexSignal(coupled + soi_samples, rate)
        cancelled = rf_cancel(antenna, pa_out, channel, spec.a_rf_db, rx_index=i)
        if cancelled.shortfall:
            warnings.append(f"rf_shortfall_rx{i}")
        x = apply_rx_stage(cancelled.signal, spec.lna)
        x = apply_iq_imbalance(x, rx_iq)
        x = apply_rx_stage(x, spec.mixer)
        x = add_thermal_noise(x, nf_main, rate, rngs["rx_noise"][i])
        post_mixer.append(x)

    # One gain setting serves every receiver and reference branch, so
    # the converters see deterministic, matched drive levels.
    p_in_w = float(np.mean([dbm_to_watts(measure_power(x)) for x in post_mixer]))
    wanted_gain = spec.adc_main.target_power_dbm - watts_to_dbm(p_in_w)
    lo, hi = spec.vga_range_db
    g_vga = min(max(wanted_gain, lo), hi)
    if g_vga != wanted_gain:
        warnings.append("agc_clamped")
    vga = AmplifierSpec(
        gain_db=g_vga,
        iip2_dbm=spec.vga.iip2_dbm,
        iip3_dbm=spec.vga.iip3_dbm,
        nf_db=spec.vga.nf_db,
    )

    rx_captures = []
    for x in post_mixer:
        x = apply_rx_stage(x, vga)
        rx_captures.append(agc_and_quantize(x, spec.adc_main, gain_db=0.0).signal)

    ref_captures = []
    for j in range(spec.n_tx):
        r = reference_rx_front_end(pa_out[j], spec)
        r = apply_iq_imbalance(r, rx_iq)
        r = apply_rx_stage(r, spec.mixer)
        r = add_thermal_noise(r, nf_ref, rate, rngs["ref_noise"][j])
        r = apply_rx_stage(r, vga)
        ref_captures.append(agc_and_quantize(r, spec.adc_ref, gain_db=0.0).signal)

    return TrialCapture(
        rx=tuple(rx_captures),
        refs=tuple(ref_captures),
        tx_data=tuple(tx_data),
        soi=tuple(soi_clean),
        n_est=n_est,
        n_eval=cfg.n_eval,
        warnings=tuple(warnings),
    )


def score_capture(cfg: ScenarioConfig, capture: TrialCapture, variant, calibrated):
    """Cancel and score one capture; returns (mean dB, per-rx, warnings)."""
    band_edge = occupied_band_edge_hz(cfg.ofdm)
    rate = cfg.ofdm.sample_rate_hz
    window = slice(capture.n_est, capture.n_est + capture.n_eval)
    per_rx = []
    for i, rx in enumerate(capture.rx):
        residual, _ = run_canceller(
            variant,
            rx,
            capture.tx_data,
            capture.refs,
            cfg.m_taps,
            capture.n_est,
            max_order=cfg.nonlinear_max_order,
            calibrated=calibrated,
        )
        per_rx.append(
            measure_sinr(
                residual.samples[window],
                capture.soi[i].samples[window],
                fit_taps=cfg.fit_taps,
                band_edge_hz=band_edge,
                cap_db=cfg.sinr_cap_db,
                sample_rate_hz=rate,
            )
        )
    warnings = tuple(dict.fromkeys(capture.warnings))
    return float(np.mean(per_rx)), tuple(per_rx), warnings


def simulate_trial(
    cfg: ScenarioConfig, variant, p_tx_dbm, n_est, seed, calibrated=None, trial=0
) -> SinrResult:
    """Simulate one capture, run one canceller, score the residual."""
    if calibrated is None:
        calibrated = cfg.calibration
    capture = simulate_capture(cfg, p_tx_dbm, n_est, seed, calibrated)
    sinr_db, per_rx, warnings = score_capture(cfg, capture, variant, calibrated)
    return SinrResult(
        experiment=cfg.experiment,
        variant=variant,
        p_tx_dbm=float(p_tx_dbm),
        n_est=int(n_est),
        calibrated=bool(calibrated),
        trial=int(trial),
        seed=int(seed),
        sinr_db=sinr_db,
        per_rx_sinr_db=per_rx,
        warnings=warnings,
    )


def _format_field(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _result_row(result: SinrResult):
    return [
        result.experiment,
        result.variant,
        _format_field(result.p_tx_dbm),
        str(result.n_est),
        _format_field(result.calibrated),
        str(result.trial),
        str(result.seed),
        _format_field(result.sinr_db),
        ";".join(result.warnings),
    ]


def write_results_csv(path, results) -> None:
    """Write trial rows in the documented column order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_CSV_COLUMNS)
        for result in results:
            writer.writerow(_result_row(result))


def run_experiment(cfg: ScenarioConfig, progress=None):
    """Sweep the configured grid, streaming rows to ``cfg.output``.

    Returns the list of SinrResult rows (budget sweeps return the
    analytic rows instead). The output path is opened before any
    simulation so an unwritable destination fails immediately.
    """
    if cfg.experiment == "budget-sweep":
        write_budget_csv(cfg.output, cfg.transceiver, cfg.p_tx_grid_dbm)
        rows = []
        for variant in ("proposed", "traditional"):
            rows.extend(sweep_budget(cfg.transceiver, cfg.p_tx_grid_dbm, variant))
        return rows

    variants = cfg.resolved_variants()
    results = []
    with open(cfg.output, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_CSV_COLUMNS)

        if cfg.experiment == "sinr-vs-ptx":
            grid = [(gi, p) for gi, p in enumerate(cfg.p_tx_grid_dbm)]
            for gi, p_tx in grid:
                for t in range(cfg.n_trials):
                    seed = trial_seed(cfg.master_seed, gi, t)
                    capture = simulate_capture(
                        cfg, p_tx, PTX_SWEEP_N_EST, seed, cfg.calibration
                    )
                    for variant in variants:
                        sinr_db, per_rx, warnings = score_capture(
                            cfg, capture, variant, cfg.calibration
                        )
                        result = SinrResult(
                            cfg.experiment, variant, float(p_tx),
                            PTX_SWEEP_N_EST, cfg.calibration, t, seed,
                            sinr_db, per_rx, warnings,
                        )
                        results.append(result)
                        writer.writerow(_result_row(result))
                if progress is not None:
                    progress(f"p_tx {p_tx:+.4g} dBm done ({cfg.n_trials} trials)")
        else:
            p_tx = cfg.transceiver.p_tx_dbm
            for gi, n_est in enumerate(cfg.n_est_grid):
                for t in range(cfg.n_trials):
                    seed = trial_seed(cfg.master_seed, gi, t)
                    for calibrated in (True, False):
                        capture = simulate_capture(cfg, p_tx, n_est, seed, calibrated)
                        for variant in variants:
                            sinr_db, per_rx, warnings = score_capture(
                                cfg, capture, variant, calibrated
                            )
                            result = SinrResult(
                                cfg.experiment, variant, float(p_tx),
                                int(n_est), calibrated, t, seed,
                                sinr_db, per_rx, warnings,
                            )
                            results.append(result)
                            writer.writerow(_result_row(result))
                if progress is not None:
                    progress(f"n_est {n_est} done ({cfg.n_trials} trials)")
    return results


def aggregate_sinr(results):
    """Reduce trial rows to per-grid-point statistics, first-seen order."""
    groups = {}
    order = []
    for r in results:
        key = (r.variant, r.p_tx_dbm, r.n_est, r.calibrated)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(r.sinr_db)
    summaries = []
    for key in order:
        values = np.asarray(groups[key], dtype=float)
        variant, p_tx_dbm, n_est, calibrated = key
        std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        summaries.append(
            SinrSummary(
                variant=variant,
                p_tx_dbm=p_tx_dbm,
                n_est=n_est,
                calibrated=calibrated,
                mean_sinr_db=float(np.mean(values)),
                std_sinr_db=std,
                n_trials=len(values),
            )
        )
    return summaries
