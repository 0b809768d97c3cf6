"""Baseband waveform primitives: OFDM frame generation, power
measurement, truncated linear convolution, and Rician multipath channel
draws for the self-interference coupling paths.

Sample convention: |sample|^2 is instantaneous power in watts, so a
signal's average power in dBm is 10*log10(mean |s|^2) + 30.
"""

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .units import dbm_to_watts, watts_to_dbm


@dataclass
class ComplexSignal:
    """Complex baseband samples plus the rate they were taken at.

    Attributes
    ----------
    samples : ndarray of complex128
        Baseband samples; |s|^2 is instantaneous power in watts.
    sample_rate_hz : float
        Sample rate, strictly positive.
    """

    samples: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if not self.sample_rate_hz > 0:
            raise ValueError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")

    def __len__(self):
        return self.samples.shape[0]

    def with_samples(self, samples):
        """New signal at the same rate with different samples."""
        return ComplexSignal(samples, self.sample_rate_hz)


@dataclass(frozen=True)
class OfdmConfig:
    """OFDM numerology.

    Defaults give 64 subcarriers (48 carrying data), 16-QAM, a guard
    interval of 16 base-rate samples, and 4x oversampling over a 4 us
    useful symbol, i.e. 320 samples per full symbol at 64 MHz.
    """

    n_subcarriers: int = 64
    n_data: int = 48
    qam_order: int = 16
    guard_samples: int = 16
    oversampling: int = 4
    symbol_duration_s: float = 4e-6

    def __post_init__(self):
        if self.n_data >= self.n_subcarriers:
            raise ValueError("n_data must leave at least the DC subcarrier empty")
        if self.qam_order not in (4, 16, 64, 256):
            raise ValueError(f"unsupported QAM order {self.qam_order}")
        if self.guard_samples < 0 or self.oversampling < 1:
            raise ValueError("guard_samples must be >= 0 and oversampling >= 1")

    @property
    def fft_size(self):
        return self.n_subcarriers * self.oversampling

    @property
    def sample_rate_hz(self):
        return self.n_subcarriers * self.oversampling / self.symbol_duration_s

    @property
    def samples_per_symbol(self):
        return (self.n_subcarriers + self.guard_samples) * self.oversampling


@dataclass
class MimoChannel:
    """Per-antenna-pair impulse responses.

    taps has shape (n_rx, n_tx, m_taps); los_delay is the tap index of
    the dominant component, shared by all pairs.
    """

    taps: np.ndarray
    los_delay: int = 0
    sample_rate_hz: float = field(default=64e6)

    def __post_init__(self):
        self.taps = np.asarray(self.taps, dtype=np.complex128)
        if self.taps.ndim != 3:
            raise ValueError("taps must have shape (n_rx, n_tx, m_taps)")
        if not 0 <= self.los_delay < self.taps.shape[2]:
            raise ValueError("los_delay outside tap range")

    @property
    def n_rx(self):
        return self.taps.shape[0]

    @property
    def n_tx(self):
        return self.taps.shape[1]

    @property
    def m_taps(self):
        return self.taps.shape[2]

    def response(self, rx, tx):
        """Impulse response of the (rx, tx) pair."""
        return self.taps[rx, tx]


def measure_power(x):
    """Average power of a signal in dBm.

    Parameters
    ----------
    x : ComplexSignal or ndarray
        Signal whose mean |s|^2 is taken as average power in watts.

    Returns
    -------
    float
        Power in dBm; an all-zero signal gives -inf without warning.
    """
    samples = x.samples if isinstance(x, ComplexSignal) else np.asarray(x)
    if samples.size == 0:
        raise ValueError("cannot measure power of an empty signal")
    p = np.mean(samples.real**2 + samples.imag**2)
    return float(watts_to_dbm(p))


def _qam_constellation(order):
    # Unit-average-power square QAM levels per rail.
    side = int(np.sqrt(order))
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    scale = np.sqrt(np.mean(levels**2) * 2.0)
    return levels / scale


def _data_subcarriers(cfg):
    # Fill outward from DC, skipping DC itself, so the occupied band is
    # centered and the outermost subcarriers stay empty.
    ks = []
    k = 1
    while len(ks) < cfg.n_data:
        ks.append(k)
        if len(ks) < cfg.n_data:
            ks.append(-k)
        k += 1
    if max(abs(v) for v in ks) > (cfg.n_subcarriers // 2 - 1):
        raise ValueError("n_data does not fit inside the subcarrier grid")
    return np.array(ks)


def generate_ofdm_frame(cfg, n_symbols, power_dbm, seed):
    """Generate a cyclic-prefixed OFDM frame.

    Parameters
    ----------
    cfg : OfdmConfig
    n_symbols : int
        Number of OFDM symbols, >= 1.
    power_dbm : float
        Average power the returned frame is normalized to.
    seed : int, SeedSequence or Generator
        Randomness source for the data symbols.

    Returns
    -------
    ComplexSignal
        n_symbols * cfg.samples_per_symbol samples at cfg.sample_rate_hz.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    rng = np.random.default_rng(seed)
    levels = _qam_constellation(cfg.qam_order)
    side = levels.shape[0]
    ks = _data_subcarriers(cfg)

    re = levels[rng.integers(0, side, size=(n_symbols, cfg.n_data))]
    im = levels[rng.integers(0, side, size=(n_symbols, cfg.n_data))]
    data = re + 1j * im

    grid = np.zeros((n_symbols, cfg.fft_size), dtype=np.complex128)
    grid[:, ks % cfg.fft_size] = data
    body = np.fft.ifft(grid, axis=1) * cfg.fft_size

    cp = cfg.guard_samples * cfg.oversampling
    if cp > 0:
        body = np.concatenate([body[:, -cp:], body], axis=1)
    samples = body.reshape(-1)

    target = dbm_to_watts(power_dbm)
    mean_p = np.mean(samples.real**2 + samples.imag**2)
    samples = samples * np.sqrt(target / mean_p)
    return ComplexSignal(samples, cfg.sample_rate_hz)


def convolve(x, h):
    """Linear convolution of a signal with an impulse response,
    truncated to the input length and aligned to the input start.

    Parameters
    ----------
    x : ComplexSignal
    h : ndarray
        Impulse response, at least one tap.

    Returns
    -------
    ComplexSignal
        y[n] = sum_k h[k] x[n-k], length len(x).
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 1 or h.shape[0] < 1:
        raise ValueError("impulse response must be a non-empty 1-d array")
    y = backend.convolve_trunc(np.ascontiguousarray(x.samples), h)
    return x.with_samples(y)


def draw_si_channel(
    n_rx,
    n_tx,
    m_taps,
    k_factor_db,
    los_delay,
    mean_path_loss_db,
    seed,
    sample_rate_hz=64e6,
):
    """Draw a Rician self-interference coupling channel.

    Each (rx, tx) pair gets an independent response: a dominant tap of
    deterministic magnitude at los_delay (random phase) and circular
    Gaussian scattered taps elsewhere, normalized per draw so the
    dominant-to-scattered power ratio equals k_factor_db exactly and the
    total tap power equals -mean_path_loss_db.

    Parameters
    ----------
    n_rx, n_tx : int
    m_taps : int
        Response length; must exceed 1 unless k_factor_db is +inf.
    k_factor_db : float
        Dominant-to-scattered power ratio; +inf collapses to a single tap.
    los_delay : int
        Index of the dominant tap, in [0, m_taps).
    mean_path_loss_db : float
        Total power of each pair's response is 10^(-loss/10).
    seed : int, SeedSequence or Generator

    Returns
    -------
    MimoChannel
    """
    if m_taps < 1:
        raise ValueError("m_taps must be >= 1")
    if not 0 <= los_delay < m_taps:
        raise ValueError("los_delay outside tap range")
    k_lin = 10.0 ** (k_factor_db / 10.0) if np.isfinite(k_factor_db) else np.inf
    if np.isfinite(k_lin) and m_taps == 1:
        raise ValueError("finite k_factor_db needs m_taps > 1 for scattered taps")

    rng = np.random.default_rng(seed)
    total = 10.0 ** (-mean_path_loss_db / 10.0)
    taps = np.zeros((n_rx, n_tx, m_taps), dtype=np.complex128)
    scatter_idx = [t for t in range(m_taps) if t != los_delay]

    for i in range(n_rx):
        for j in range(n_tx):
            phase = np.exp(2j * np.pi * rng.random())
            if np.isfinite(k_lin):
                p_los = total * k_lin / (k_lin + 1.0)
                p_scat = total / (k_lin + 1.0)
                raw = rng.standard_normal(len(scatter_idx)) + 1j * rng.standard_normal(
                    len(scatter_idx)
                )
                raw *= np.sqrt(p_scat / np.sum(np.abs(raw) ** 2))
                taps[i, j, scatter_idx] = raw
            else:
                p_los = total
            taps[i, j, los_delay] = np.sqrt(p_los) * phase

    return MimoChannel(taps, los_delay=los_delay, sample_rate_hz=sample_rate_hz)
