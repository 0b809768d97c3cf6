"""Variance floor for the lagged least-squares channel estimator and
the sample-size relation between calibrated and calibration-free
estimation.

The floor treats consecutive reference samples as uncorrelated, so the
reference covariance is p_ref times the identity and every tap shares
one bound. Calibrated estimation is the p_soi_w = 0 case.
"""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class CrlbInput:
    """Operating point for the per-tap variance bound.

    p_soi_w is the wanted-signal power at the detector during
    estimation (zero while calibrating), p_n_w the noise power,
    n_samples the estimation window length, and p_ref_w the per-branch
    reference power.
    """

    p_soi_w: float
    p_n_w: float
    n_samples: int
    p_ref_w: float

    def __post_init__(self):
        if self.p_soi_w < 0 or self.p_n_w < 0 or self.p_ref_w < 0:
            raise ValueError("powers must be nonnegative")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")


def crlb_per_tap(inp: CrlbInput) -> float:
    """Lower bound on the variance of one estimated tap:
    (p_soi + p_n) / (n_samples * p_ref)."""
    if not inp.p_ref_w > 0:
        raise ValueError("p_ref_w must be positive")
    return (inp.p_soi_w + inp.p_n_w) / (inp.n_samples * inp.p_ref_w)


def required_samples(n_c: int, snr_linear: float) -> int:
    """Samples needed without a calibration period to match the
    estimation accuracy of ``n_c`` calibrated samples, at the given
    detector-input signal-to-noise ratio (linear): ceil(n_c*(snr+1))."""
    if n_c < 1:
        raise ValueError("n_c must be >= 1")
    if snr_linear < 0:
        raise ValueError("snr_linear must be >= 0")
    return math.ceil(n_c * (snr_linear + 1.0))
