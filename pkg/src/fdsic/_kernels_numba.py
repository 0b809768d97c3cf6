"""Numba-compiled per-sample kernels. Loop bodies fuse the elementwise work
that the numpy fallback does in several passes; see _kernels_numpy for the
reference semantics."""

import numpy as np
from numba import njit


@njit(cache=True)
def pa_cubic(x, a1, a3):
    n = x.shape[0]
    y = np.empty(n, dtype=np.complex128)
    for i in range(n):
        v = x[i]
        absq = v.real * v.real + v.imag * v.imag
        y[i] = v * (a1 + a3 * absq)
    return y


@njit(cache=True)
def rx_poly(x, a1, a2, a3):
    n = x.shape[0]
    y = np.empty(n, dtype=np.complex128)
    for i in range(n):
        v = x[i]
        absq = v.real * v.real + v.imag * v.imag
        y[i] = v * (a1 + a3 * absq) + a2 * absq
    return y


@njit(cache=True)
def quantize_midrise(x, step):
    n = x.shape[0]
    y = np.empty(n, dtype=np.complex128)
    for i in range(n):
        re = step * (np.floor(x[i].real / step) + 0.5)
        im = step * (np.floor(x[i].imag / step) + 0.5)
        y[i] = complex(re, im)
    return y


@njit(cache=True)
def convolve_trunc(x, h):
    n = x.shape[0]
    m = h.shape[0]
    y = np.zeros(n, dtype=np.complex128)
    for i in range(n):
        kmax = m - 1 if i >= m - 1 else i
        acc = 0.0 + 0.0j
        for k in range(kmax + 1):
            acc += h[k] * x[i - k]
        y[i] = acc
    return y


@njit(cache=True)
def lagged_matrix(x, m):
    n = x.shape[0]
    if n < m:
        raise ValueError("need at least m samples")
    rows = n - m + 1
    out = np.empty((rows, m), dtype=np.complex128)
    for r in range(rows):
        for c in range(m):
            out[r, c] = x[m - 1 + r - c]
    return out


def _warmup():
    # Force compilation of all kernels on a tiny input so first real use is hot.
    z = np.zeros(4, dtype=np.complex128)
    pa_cubic(z, 1.0, 0.0)
    rx_poly(z, 1.0, 0.0, 0.0)
    quantize_midrise(z, 1.0)
    convolve_trunc(z, z[:2])
    lagged_matrix(z, 2)
