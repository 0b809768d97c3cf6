"""Closed-form power levels at the detector input of one receive
chain, for two full-duplex architectures.

The "proposed" budget models digital cancellation that works from
reference receivers tapped at the transmitter outputs, so transmitter
distortion products are cancelable. The "traditional" budget models
cancellation built from the known transmitted samples, which carries
no transmitter impairments, and has no reference-receiver ADCs.

All intermediate arithmetic is in linear power units (watts); dB
conversion happens only at the module boundary.
"""

import csv
import math
from dataclasses import dataclass, replace

from .impairments import AdcSpec, AmplifierSpec
from .units import (
    db_to_lin,
    dbm_to_watts,
    lin_to_db,
    thermal_noise_watts,
    watts_to_dbm,
)

VARIANTS = ("proposed", "traditional")

BUDGET_CSV_COLUMNS = (
    "variant",
    "p_tx_dbm",
    "g_rx_db",
    "p_soi_dbm",
    "p_n_dbm",
    "p_si_dbm",
    "p_si_im_dbm",
    "p_nl_tx_dbm",
    "p_nl_rx_dbm",
    "p_q_tot_dbm",
    "sinr_db",
)


@dataclass(frozen=True)
class TransceiverSpec:
    """Full parameter set for one MIMO full-duplex node.

    Power quantities are dBm, attenuations and gains dB. ``a_ant_db``
    is the antenna isolation seen by each transmit signal, ``a_rf_db``
    the analog cancellation on top of it, and ``a_dig_db`` the digital
    cancellation assumed by the analytic budget (infinite by default,
    i.e. perfect estimation). ``p_soi_in_dbm`` is the wanted signal at
    a receive antenna and ``f_rx_db`` the cascade noise figure used
    for the analytic noise floor.
    """

    n_tx: int = 2
    n_rx: int = 2
    p_tx_dbm: float = 15.0
    a_ant_db: float = 40.0
    a_rf_db: float = 30.0
    a_dig_db: float = math.inf
    p_soi_in_dbm: float = -83.9
    f_rx_db: float = 4.1
    bandwidth_hz: float = 12.5e6
    irr_tx_db: float = 25.0
    irr_rx_db: float = 60.0
    pa: AmplifierSpec = AmplifierSpec(gain_db=27.0, iip3_dbm=15.0, nf_db=5.0)
    lna: AmplifierSpec = AmplifierSpec(gain_db=25.0, iip3_dbm=5.0, nf_db=4.1)
    mixer: AmplifierSpec = AmplifierSpec(
        gain_db=6.0, iip2_dbm=50.0, iip3_dbm=15.0, nf_db=4.0
    )
    vga: AmplifierSpec = AmplifierSpec(
        gain_db=0.0, iip2_dbm=50.0, iip3_dbm=20.0, nf_db=4.0
    )
    adc_main: AdcSpec = AdcSpec(bits=12, papr_headroom_db=10.0, target_power_dbm=-10.0)
    adc_ref: AdcSpec = AdcSpec(bits=12, papr_headroom_db=10.0, target_power_dbm=-10.0)
    vga_range_db: tuple = (0.0, 69.0)

    def __post_init__(self):
        if self.n_tx < 1 or self.n_rx < 1:
            raise ValueError("n_tx and n_rx must be at least 1")
        for name in ("a_ant_db", "a_rf_db", "a_dig_db"):
            value = getattr(self, name)
            if math.isnan(value) or value < 0.0:
                raise ValueError(f"{name} must be a nonnegative attenuation in dB")
        if not self.bandwidth_hz > 0:
            raise ValueError("bandwidth_hz must be positive")
        lo, hi = self.vga_range_db
        if lo > hi:
            raise ValueError("vga_range_db must be (low, high)")


@dataclass(frozen=True)
class PowerBudget:
    """Average power of each detector-input component, in dB units.

    Absent components (for example linear self-interference under
    infinite digital cancellation) carry -inf dBm.
    """

    g_rx_db: float
    p_soi_dbm: float
    p_n_dbm: float
    p_si_dbm: float
    p_si_im_dbm: float
    p_nl_tx_dbm: float
    p_nl_rx_dbm: float
    p_q_tot_dbm: float
    sinr_db: float


def adc_snr_db(adc: AdcSpec) -> float:
    """Granular quantization SNR in dB for a converter whose full
    scale sits ``papr_headroom_db`` above the signal's mean power."""
    return 6.02 * adc.bits + 4.76 - adc.papr_headroom_db


def ideal_sinr_db(spec: TransceiverSpec) -> float:
    """SINR of an interference-free receiver: wanted signal over the
    thermal floor at the configured bandwidth and noise figure."""
    floor = watts_to_dbm(thermal_noise_watts(spec.bandwidth_hz, spec.f_rx_db))
    return spec.p_soi_in_dbm - float(floor)


def _intercept_watts(dbm, label):
    if dbm is None:
        return math.inf
    watts = float(dbm_to_watts(dbm))
    if not watts > 0.0:
        raise ValueError(f"{label} must be positive in linear units")
    return watts


def _evaluate(spec, tx_distortion_cancelable, count_ref_adc):
    p_tx = float(dbm_to_watts(spec.p_tx_dbm))
    p_target = float(dbm_to_watts(spec.adc_main.target_power_dbm))
    p_soi_in = float(dbm_to_watts(spec.p_soi_in_dbm))
    a_ant = float(db_to_lin(spec.a_ant_db))
    a_rf = float(db_to_lin(spec.a_rf_db))
    a_dig = float(db_to_lin(spec.a_dig_db))
    f_rx = float(db_to_lin(spec.f_rx_db))
    irr_tx = float(db_to_lin(spec.irr_tx_db))
    irr_rx = float(db_to_lin(spec.irr_rx_db))
    p_th = float(thermal_noise_watts(spec.bandwidth_hz))
    n_tx = spec.n_tx

    g_pa = float(db_to_lin(spec.pa.gain_db))
    g_lna = float(db_to_lin(spec.lna.gain_db))
    g_mix = float(db_to_lin(spec.mixer.gain_db))
    iip3_pa = _intercept_watts(spec.pa.iip3_dbm, "pa iip3")
    iip3_lna = _intercept_watts(spec.lna.iip3_dbm, "lna iip3")
    iip2_mix = _intercept_watts(spec.mixer.iip2_dbm, "mixer iip2")
    iip3_mix = _intercept_watts(spec.mixer.iip3_dbm, "mixer iip3")
    iip2_vga = _intercept_watts(spec.vga.iip2_dbm, "vga iip2")
    iip3_vga = _intercept_watts(spec.vga.iip3_dbm, "vga iip3")

    # TX distortion not suppressed by data-reference cancellation
    a_dig_tx = a_dig if tx_distortion_cancelable else 1.0

    pa_ratio = p_tx**2 / (iip3_pa**2 * g_pa**2)
    denom = (n_tx * p_tx / a_ant) * (1.0 / a_rf + pa_ratio / a_rf) + p_soi_in
    g_rx = p_target / denom

    p_soi = g_rx * p_soi_in
    p_n = f_rx * g_rx * p_th
    p_si = n_tx * g_rx * p_tx / (a_ant * a_rf * a_dig)
    p_si_im = (g_rx * p_tx / (a_ant * a_rf)) * (
        n_tx / (a_dig_tx * irr_tx) + (n_tx + 1) / irr_rx
    )
    p_nl_tx = n_tx * g_rx * p_tx**3 / (iip3_pa**2 * g_pa**2 * a_ant * a_rf * a_dig_tx)

    envelope = (n_tx + 1) * (
        g_lna / iip2_mix + g_lna * g_mix / (2.0 * iip2_vga)
    )
    cubic = ((n_tx**2 + 1) * p_tx / (a_ant * a_rf)) * (
        (g_lna / iip3_mix) ** 2 + (g_lna * g_mix / (2.0 * iip3_vga)) ** 2
    )
    lna_cubic = n_tx**2 * p_tx / (a_ant * a_rf * iip3_lna**2)
    p_nl_rx = (n_tx * g_rx * p_tx**2 / (a_ant**2 * a_rf**2)) * (
        envelope + cubic + lna_cubic
    )

    p_q_tot = p_target / db_to_lin(adc_snr_db(spec.adc_main))
    if count_ref_adc:
        p_q_tot = p_q_tot + p_target * n_tx / db_to_lin(adc_snr_db(spec.adc_ref))
    p_q_tot = float(p_q_tot)

    interference = p_n + p_si + p_si_im + p_nl_tx + p_nl_rx + p_q_tot
    return PowerBudget(
        g_rx_db=float(lin_to_db(g_rx)),
        p_soi_dbm=float(watts_to_dbm(p_soi)),
        p_n_dbm=float(watts_to_dbm(p_n)),
        p_si_dbm=float(watts_to_dbm(p_si)),
        p_si_im_dbm=float(watts_to_dbm(p_si_im)),
        p_nl_tx_dbm=float(watts_to_dbm(p_nl_tx)),
        p_nl_rx_dbm=float(watts_to_dbm(p_nl_rx)),
        p_q_tot_dbm=float(watts_to_dbm(p_q_tot)),
        sinr_db=float(lin_to_db(p_soi / interference)),
    )


def budget_proposed(spec: TransceiverSpec) -> PowerBudget:
    """Budget for the architecture whose cancellation reference is
    tapped from the transmitter outputs through auxiliary receivers."""
    return _evaluate(spec, tx_distortion_cancelable=True, count_ref_adc=True)


def budget_traditional(spec: TransceiverSpec) -> PowerBudget:
    """Budget for the architecture whose cancellation reference is the
    known transmitted samples (no auxiliary receivers)."""
    return _evaluate(spec, tx_distortion_cancelable=False, count_ref_adc=False)


_BUDGETS = {"proposed": budget_proposed, "traditional": budget_traditional}


def sweep_budget(spec, p_tx_range_dbm, variant="proposed"):
    """Evaluate one budget per transmit power. Returns a list of
    PowerBudget in the order of ``p_tx_range_dbm``."""
    try:
        evaluate = _BUDGETS[variant]
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    points = list(p_tx_range_dbm)
    if not points:
        raise ValueError("p_tx_range_dbm must be non-empty")
    return [evaluate(replace(spec, p_tx_dbm=float(p))) for p in points]


def write_budget_csv(path, spec, p_tx_range_dbm, variants=VARIANTS):
    """Write budget sweeps for the given variants to one CSV file.

    Fixed column order (BUDGET_CSV_COLUMNS), one row per variant and
    transmit power, '%.10g' number formatting, newline-terminated
    rows. Absent components appear as '-inf'.
    """
    points = [float(p) for p in p_tx_range_dbm]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(BUDGET_CSV_COLUMNS)
        for variant in variants:
            for p_tx, budget in zip(points, sweep_budget(spec, points, variant)):
                row = [variant, f"{p_tx:.10g}"] + [
                    f"{getattr(budget, name):.10g}"
                    for name in BUDGET_CSV_COLUMNS[2:]
                ]
                writer.writerow(row)
