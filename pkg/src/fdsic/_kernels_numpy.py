"""Vectorized numpy implementations of the per-sample kernels.

These are the fallback path when numba is unavailable or when
FDSIC_BACKEND=numpy is set. Semantics must match _kernels_numba exactly
(up to floating-point summation order).
"""

import numpy as np


def pa_cubic(x, a1, a3):
    """y[n] = a1*x[n] + a3*x[n]*|x[n]|^2 for real coefficients a1, a3."""
    absq = x.real * x.real + x.imag * x.imag
    return x * (a1 + a3 * absq)


def rx_poly(x, a1, a2, a3):
    """y[n] = a1*x[n] + a2*|x[n]|^2 + a3*x[n]*|x[n]|^2."""
    absq = x.real * x.real + x.imag * x.imag
    return x * (a1 + a3 * absq) + a2 * absq


def quantize_midrise(x, step):
    """Uniform mid-rise quantization of each I/Q rail with the given step."""
    re = step * (np.floor(x.real / step) + 0.5)
    im = step * (np.floor(x.imag / step) + 0.5)
    return re + 1j * im


def convolve_trunc(x, h):
    """Linear convolution truncated to len(x), aligned to the input start."""
    return np.convolve(x, h)[: x.shape[0]]


def lagged_matrix(x, m):
    """(N-m+1, m) matrix with entry [r, c] = x[m-1+r-c]."""
    if x.shape[0] < m:
        raise ValueError(f"need at least {m} samples, got {x.shape[0]}")
    return np.lib.stride_tricks.sliding_window_view(x, m)[:, ::-1].copy()
