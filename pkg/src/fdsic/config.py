"""Scenario configuration: one dataclass covering radio, waveform,
channel, and experiment parameters, plus an INI-style loader.

Every radio and converter parameter is addressable from the file;
unknown sections or keys are rejected rather than ignored so typos
fail loudly.
"""

import configparser
from dataclasses import dataclass, replace

from .cancellation import CANCELLERS
from .linkbudget import TransceiverSpec
from .waveform import OfdmConfig

EXPERIMENTS = ("budget-sweep", "sinr-vs-ptx", "sinr-vs-n")


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one simulation campaign."""

    transceiver: TransceiverSpec = TransceiverSpec()
    ofdm: OfdmConfig = OfdmConfig()
    channel_taps: int = 8
    k_factor_db: float = 35.8
    los_delay: int = 2
    experiment: str = "sinr-vs-ptx"
    p_tx_grid_dbm: tuple = (-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0)
    n_est_grid: tuple = (100, 300, 1000, 3000, 10000, 30000, 100000, 300000)
    variants: tuple = None  # None -> per-experiment default
    n_trials: int = 20
    calibration: bool = True
    master_seed: int = 1
    n_eval: int = 10000
    m_taps: int = 8
    nonlinear_max_order: int = 3
    fit_taps: int = 4
    sinr_cap_db: float = 60.0
    output: str = "results.csv"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}"
            )
        if not self.p_tx_grid_dbm or not self.n_est_grid:
            raise ValueError("sweep grids must be non-empty")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.channel_taps < 1:
            raise ValueError("channel_taps must be >= 1")
        if not 0 <= self.los_delay < self.channel_taps:
            raise ValueError("los_delay outside the channel tap range")
        if self.m_taps < 1 or self.fit_taps < 1 or self.n_eval < 1:
            raise ValueError("m_taps, fit_taps and n_eval must be >= 1")
        if self.variants is not None:
            unknown = [v for v in self.variants if v not in CANCELLERS]
            if unknown:
                raise ValueError(f"unknown canceller variants: {unknown}")
            if not self.variants:
                raise ValueError("variants must be non-empty when given")

    def resolved_variants(self):
        """Cancellers this experiment runs. The sample-size sweep
        defaults to the reference-receiver canceller only."""
        if self.variants is not None:
            return tuple(self.variants)
        if self.experiment == "sinr-vs-n":
            return ("ref-rx",)
        return CANCELLERS


def _parse_float(text):
    value = float(text)
    return value


def _parse_optional_float(text):
    if text.strip().lower() in ("none", ""):
        return None
    return float(text)


def _parse_int(text):
    return int(text)


def _parse_bool(text):
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_float_list(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_int_list(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _parse_str_list(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


# section -> key -> (target field, parser). Amplifier/ADC sections are
# handled generically below.
_TRANSCEIVER_KEYS = {
    "n_tx": _parse_int,
    "n_rx": _parse_int,
    "p_tx_dbm": _parse_float,
    "a_ant_db": _parse_float,
    "a_rf_db": _parse_float,
    "a_dig_db": _parse_float,
    "p_soi_in_dbm": _parse_float,
    "f_rx_db": _parse_float,
    "bandwidth_hz": _parse_float,
    "irr_tx_db": _parse_float,
    "irr_rx_db": _parse_float,
    "vga_min_db": _parse_float,
    "vga_max_db": _parse_float,
}

_AMPLIFIER_KEYS = {
    "gain_db": _parse_float,
    "iip2_dbm": _parse_optional_float,
    "iip3_dbm": _parse_optional_float,
    "nf_db": _parse_float,
}

_ADC_KEYS = {
    "bits": _parse_int,
    "papr_headroom_db": _parse_float,
    "target_power_dbm": _parse_float,
}

_OFDM_KEYS = {
    "n_subcarriers": _parse_int,
    "n_data": _parse_int,
    "qam_order": _parse_int,
    "guard_samples": _parse_int,
    "oversampling": _parse_int,
    "symbol_duration_s": _parse_float,
}

_CHANNEL_KEYS = {
    "m_taps": _parse_int,
    "k_factor_db": _parse_float,
    "los_delay": _parse_int,
}

_EXPERIMENT_KEYS = {
    "kind": str,
    "p_tx_grid_dbm": _parse_float_list,
    "n_est_grid": _parse_int_list,
    "variants": _parse_str_list,
    "n_trials": _parse_int,
    "calibration": _parse_bool,
    "master_seed": _parse_int,
    "n_eval": _parse_int,
    "m_taps": _parse_int,
    "nonlinear_max_order": _parse_int,
    "fit_taps": _parse_int,
    "sinr_cap_db": _parse_float,
    "output": str,
}

_SECTIONS = {
    "transceiver": _TRANSCEIVER_KEYS,
    "pa": _AMPLIFIER_KEYS,
    "lna": _AMPLIFIER_KEYS,
    "mixer": _AMPLIFIER_KEYS,
    "vga": _AMPLIFIER_KEYS,
    "adc": _ADC_KEYS,
    "adc_ref": _ADC_KEYS,
    "ofdm": _OFDM_KEYS,
    "channel": _CHANNEL_KEYS,
    "experiment": _EXPERIMENT_KEYS,
}


def _section_values(parser, name):
    table = _SECTIONS[name]
    values = {}
    if not parser.has_section(name):
        return values
    for key, raw in parser.items(name):
        if key not in table:
            raise ValueError(f"unknown key {key!r} in section [{name}]")
        try:
            values[key] = table[key](raw)
        except ValueError as err:
            raise ValueError(f"bad value for {key!r} in [{name}]: {err}") from err
    return values


def load_config(path) -> ScenarioConfig:
    """Parse an INI scenario file into a ScenarioConfig.

    Absent sections and keys keep their defaults; unknown ones raise.
    """
    parser = configparser.ConfigParser(interpolation=None)
    with open(path) as fh:
        parser.read_file(fh)

    for section in parser.sections():
        if section not in _SECTIONS:
            raise ValueError(
                f"unknown section [{section}]; expected {sorted(_SECTIONS)}"
            )

    spec = TransceiverSpec()
    tx_values = _section_values(parser, "transceiver")
    vga_lo = tx_values.pop("vga_min_db", spec.vga_range_db[0])
    vga_hi = tx_values.pop("vga_max_db", spec.vga_range_db[1])
    spec = replace(spec, vga_range_db=(vga_lo, vga_hi), **tx_values)
    for section, attr in (("pa", "pa"), ("lna", "lna"), ("mixer", "mixer"), ("vga", "vga")):
        values = _section_values(parser, section)
        if values:
            spec = replace(spec, **{attr: replace(getattr(spec, attr), **values)})
    for section, attr in (("adc", "adc_main"), ("adc_ref", "adc_ref")):
        values = _section_values(parser, section)
        if values:
            spec = replace(spec, **{attr: replace(getattr(spec, attr), **values)})

    ofdm = OfdmConfig()
    ofdm_values = _section_values(parser, "ofdm")
    if ofdm_values:
        ofdm = replace(ofdm, **ofdm_values)

    cfg_kwargs = {"transceiver": spec, "ofdm": ofdm}
    channel_values = _section_values(parser, "channel")
    if "m_taps" in channel_values:
        cfg_kwargs["channel_taps"] = channel_values["m_taps"]
    if "k_factor_db" in channel_values:
        cfg_kwargs["k_factor_db"] = channel_values["k_factor_db"]
    if "los_delay" in channel_values:
        cfg_kwargs["los_delay"] = channel_values["los_delay"]

    exp_values = _section_values(parser, "experiment")
    if "kind" in exp_values:
        cfg_kwargs["experiment"] = exp_values.pop("kind")
    cfg_kwargs.update(exp_values)
    return ScenarioConfig(**cfg_kwargs)
