"""Runtime self-checks for the impairment models.

Each check regenerates a textbook bench measurement (two-tone
intercept probes, image-ratio probe, noise-floor integration,
converter SNDR) and compares it against the configured component
values, so a misconfigured chain is caught before a long campaign.
"""

from dataclasses import dataclass

import numpy as np

from .impairments import (
    IqSpec,
    add_thermal_noise,
    agc_and_quantize,
    apply_iq_imbalance,
    apply_pa,
    apply_rx_stage,
)
from .linkbudget import TransceiverSpec, adc_snr_db
from .units import dbm_to_watts, thermal_noise_watts, watts_to_dbm
from .waveform import ComplexSignal, measure_power

_N_FFT = 4096
_BIN_1 = 200
_BIN_2 = 230
_SAMPLE_RATE = 64e6


@dataclass(frozen=True)
class CheckResult:
    """One validation measurement against its configured value."""

    name: str
    measured_db: float
    expected_db: float
    tolerance_db: float

    @property
    def passed(self) -> bool:
        return abs(self.measured_db - self.expected_db) <= self.tolerance_db


def _two_tone(power_dbm_per_tone) -> ComplexSignal:
    amplitude = np.sqrt(dbm_to_watts(power_dbm_per_tone))
    n = np.arange(_N_FFT)
    samples = amplitude * (
        np.exp(2j * np.pi * _BIN_1 * n / _N_FFT)
        + np.exp(2j * np.pi * _BIN_2 * n / _N_FFT)
    )
    return ComplexSignal(samples, _SAMPLE_RATE)


def _bin_power_dbm(x: ComplexSignal, k) -> float:
    spectrum = np.fft.fft(x.samples) / len(x.samples)
    return watts_to_dbm(abs(spectrum[k]) ** 2)


def _tone(power_dbm, k=_BIN_1) -> ComplexSignal:
    amplitude = np.sqrt(dbm_to_watts(power_dbm))
    n = np.arange(_N_FFT)
    return ComplexSignal(
        amplitude * np.exp(2j * np.pi * k * n / _N_FFT), _SAMPLE_RATE
    )


def _measured_iip3_dbm(out: ComplexSignal, drive_dbm) -> float:
    im3_bin = (2 * _BIN_1 - _BIN_2) % _N_FFT
    delta = _bin_power_dbm(out, _BIN_1) - _bin_power_dbm(out, im3_bin)
    return drive_dbm + delta / 2.0


def _measured_iip2_dbm(out: ComplexSignal, drive_dbm) -> float:
    im2_bin = (_BIN_2 - _BIN_1) % _N_FFT
    delta = _bin_power_dbm(out, _BIN_1) - _bin_power_dbm(out, im2_bin)
    return drive_dbm + delta


def run_validation(spec: TransceiverSpec = TransceiverSpec()):
    """Run every self-check; returns a list of CheckResult."""
    checks = []

    amplifiers = (
        ("pa", spec.pa, apply_pa),
        ("lna", spec.lna, apply_rx_stage),
        ("mixer", spec.mixer, apply_rx_stage),
        ("vga", spec.vga, apply_rx_stage),
    )
    for name, amp, stage in amplifiers:
        if amp.iip3_dbm is not None:
            drive = amp.iip3_dbm - 30.0
            out = stage(_two_tone(drive), amp)
            checks.append(
                CheckResult(
                    f"{name} iip3", _measured_iip3_dbm(out, drive), amp.iip3_dbm, 0.3
                )
            )
        if amp.iip2_dbm is not None:
            drive = amp.iip2_dbm - 65.0
            out = stage(_two_tone(drive), amp)
            checks.append(
                CheckResult(
                    f"{name} iip2", _measured_iip2_dbm(out, drive), amp.iip2_dbm, 0.3
                )
            )

    for name, irr_db in (("tx", spec.irr_tx_db), ("rx", spec.irr_rx_db)):
        out = apply_iq_imbalance(_tone(-10.0), IqSpec(irr_db))
        image = _bin_power_dbm(out, (-_BIN_1) % _N_FFT)
        fundamental = _bin_power_dbm(out, _BIN_1)
        checks.append(
            CheckResult(f"{name} iq image ratio", fundamental - image, irr_db, 1e-6)
        )

    silence = ComplexSignal(np.zeros(1_000_000, dtype=np.complex128), _SAMPLE_RATE)
    noisy = add_thermal_noise(silence, spec.f_rx_db, _SAMPLE_RATE, 1234)
    expected = watts_to_dbm(thermal_noise_watts(_SAMPLE_RATE, spec.f_rx_db))
    checks.append(
        CheckResult("thermal noise floor", measure_power(noisy), expected, 0.1)
    )

    rng = np.random.default_rng(5678)
    target_w = dbm_to_watts(spec.adc_main.target_power_dbm)
    gaussian = np.sqrt(target_w / 2.0) * (
        rng.standard_normal(200_000) + 1j * rng.standard_normal(200_000)
    )
    loading = ComplexSignal(gaussian, _SAMPLE_RATE)
    quantized = agc_and_quantize(loading, spec.adc_main, gain_db=0.0).signal
    err_w = float(np.mean(np.abs(quantized.samples - loading.samples) ** 2))
    sndr = watts_to_dbm(target_w) - watts_to_dbm(err_w)
    checks.append(
        CheckResult("adc sndr", sndr, adc_snr_db(spec.adc_main), 1.0)
    )

    return checks
