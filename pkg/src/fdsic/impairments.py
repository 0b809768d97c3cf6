"""Baseband-equivalent models of the analog front-end components.

Every transform here follows the convention that ``|sample|**2`` is
instantaneous power in watts. Amplifier nonlinearity is memoryless
polynomial, anchored to the input intercept points so a two-tone test
recovers the configured IIP2/IIP3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, TYPE_CHECKING

import numpy as np

from . import backend
from .units import db_to_lin, dbm_to_watts, thermal_noise_watts
from .waveform import ComplexSignal

if TYPE_CHECKING:  # pragma: no cover
    from .linkbudget import TransceiverSpec


@dataclass(frozen=True)
class AmplifierSpec:
    """Gain plus optional second/third-order input intercept points.

    Parameters
    ----------
    gain_db : float
        Small-signal power gain in dB.
    iip3_dbm : float or None
        Third-order input intercept. None disables the cubic term.
    iip2_dbm : float or None
        Second-order input intercept. None disables the squared term.
    nf_db : float
        Component noise figure. Carried for bookkeeping; noise is
        injected once per chain, not per component.
    """

    gain_db: float
    iip3_dbm: float | None = None
    iip2_dbm: float | None = None
    nf_db: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.gain_db):
            raise ValueError("gain_db must be finite")


@dataclass(frozen=True)
class IqSpec:
    """IQ mixer mismatch described by its image rejection ratio."""

    irr_db: float

    def __post_init__(self) -> None:
        if not self.irr_db > 0:
            raise ValueError("irr_db must be positive")


@dataclass(frozen=True)
class AdcSpec:
    """Converter resolution and the loading the AGC aims for.

    full scale per rail is set by ``target_power_dbm`` plus
    ``papr_headroom_db`` so a signal at the target power uses the
    converter efficiently without the peaks mattering.
    """

    bits: int = 12
    papr_headroom_db: float = 10.0
    target_power_dbm: float = -10.0

    def __post_init__(self) -> None:
        if self.bits < 1:
            raise ValueError("bits must be >= 1")

    def rail_step(self) -> float:
        """Quantizer step per I/Q rail."""
        peak_power_w = dbm_to_watts(self.target_power_dbm + self.papr_headroom_db)
        # Each rail carries half the complex power at the design peak.
        rail_amplitude = np.sqrt(peak_power_w / 2.0)
        return 2.0 * rail_amplitude / 2**self.bits


class AgcResult(NamedTuple):
    signal: ComplexSignal
    applied_gain_db: float
    clamped: bool


def _coeffs(spec: AmplifierSpec) -> tuple[float, float, float]:
    a1 = db_to_lin(spec.gain_db / 2.0)  # amplitude gain
    a2 = 0.0
    a3 = 0.0
    if spec.iip3_dbm is not None and np.isfinite(spec.iip3_dbm):
        a3 = -a1 / dbm_to_watts(spec.iip3_dbm)
    if spec.iip2_dbm is not None and np.isfinite(spec.iip2_dbm):
        a2 = a1 / np.sqrt(dbm_to_watts(spec.iip2_dbm))
    return a1, a2, a3


def apply_pa(x: ComplexSignal, spec: AmplifierSpec) -> ComplexSignal:
    """Memoryless odd-order power-amplifier model.

    y = a1*x + a3*x*|x|^2 with a1 = 10^(gain_db/20) and
    a3 = -a1/iip3_linear, so the two-tone third-order intercept equals
    the configured value under the |x|^2-is-watts convention.
    """
    a1, _, a3 = _coeffs(spec)
    if a3 == 0.0:
        return x.with_samples(x.samples * a1)
    return x.with_samples(backend.pa_cubic(x.samples, a1, a3))


def apply_iq_imbalance(x: ComplexSignal, spec: IqSpec) -> ComplexSignal:
    """Add the conjugate image produced by IQ gain/phase mismatch.

    y = x + g2*conj(x) with g2 = 10^(-irr_db/20) taken real, so the
    image-to-direct power ratio is exactly -irr_db.
    """
    if np.isinf(spec.irr_db):
        return x.with_samples(x.samples.copy())
    g2 = db_to_lin(-spec.irr_db / 2.0)
    return x.with_samples(x.samples + g2 * np.conj(x.samples))


def apply_rx_stage(x: ComplexSignal, spec: AmplifierSpec) -> ComplexSignal:
    """Receive-stage amplifier with both even and odd order distortion.

    y = a1*x + a2*|x|^2 + a3*x*|x|^2 where a2 = a1/sqrt(iip2_linear)
    produces the envelope (difference-frequency) component governed by
    IIP2 and a3 follows the same convention as apply_pa.
    """
    a1, a2, a3 = _coeffs(spec)
    if a2 == 0.0 and a3 == 0.0:
        return x.with_samples(x.samples * a1)
    return x.with_samples(backend.rx_poly(x.samples, a1, a2, a3))


def add_thermal_noise(
    x: ComplexSignal, nf_db: float, bandwidth_hz: float, seed: int | np.random.Generator
) -> ComplexSignal:
    """Add circular complex Gaussian noise of total power F*k*T0*B.

    Pass the sample rate as ``bandwidth_hz`` to realize noise at the
    physical power spectral density across the whole simulated band;
    pass a narrower bandwidth to concentrate the same in-band power
    into fewer hertz.
    """
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth_hz must be positive")
    if len(x) == 0:
        return x.with_samples(x.samples.copy())
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p_noise = thermal_noise_watts(bandwidth_hz, nf_db)
    scale = np.sqrt(p_noise / 2.0)
    n = len(x)
    noise = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return x.with_samples(x.samples + noise)


def agc_and_quantize(
    x: ComplexSignal,
    adc: AdcSpec,
    vga_range_db: tuple[float, float] = (0.0, 69.0),
    gain_db: float | None = None,
) -> AgcResult:
    """Level the signal to the ADC target power, then quantize.

    The variable gain is chosen so the post-gain mean power equals
    ``adc.target_power_dbm``, clamped to ``vga_range_db`` (clamping is
    reported via the ``clamped`` flag). Pass ``gain_db`` to skip the
    measurement and apply a preset gain, e.g. to reuse the gain chosen
    for another chain. Quantization is uniform mid-rise per I/Q rail
    with the step set by ``adc.rail_step()``; only granular error is
    modeled, the AGC design load keeps overload out of scope.
    """
    lo, hi = vga_range_db
    clamped = False
    if gain_db is None:
        p_in = np.mean(np.abs(x.samples) ** 2)
        if p_in == 0.0:
            raise ValueError("cannot level a silent signal")
        gain_db = adc.target_power_dbm - (10.0 * np.log10(p_in) + 30.0)
    if gain_db < lo or gain_db > hi:
        gain_db = min(max(gain_db, lo), hi)
        clamped = True
    leveled = x.samples * db_to_lin(gain_db / 2.0)
    quantized = backend.quantize_midrise(leveled, adc.rail_step())
    return AgcResult(x.with_samples(quantized), gain_db, clamped)


def reference_rx_front_end(x_tx_out: ComplexSignal, spec: "TransceiverSpec") -> ComplexSignal:
    """Attenuator stage replacing the LNA in an auxiliary receive chain.

    Scales the tapped transmitter output by g_LNA/(a_ant*a_RF) in
    linear power so the downstream mixer and VGA observe each transmit
    signal at the same level as in the primary receive chain.
    """
    net_db = spec.lna.gain_db - spec.a_ant_db - spec.a_rf_db
    if np.isinf(net_db) and net_db < 0:
        return x_tx_out.with_samples(np.zeros_like(x_tx_out.samples))
    return x_tx_out.with_samples(x_tx_out.samples * db_to_lin(net_db / 2.0))
