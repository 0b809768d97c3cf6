"""Kernel backend selection.

The per-sample kernels exist twice: numba-compiled loops
(_kernels_numba) and vectorized numpy fallbacks (_kernels_numpy). The
environment variable FDSIC_BACKEND picks one at import time:

    FDSIC_BACKEND=numba   compiled kernels (default)
    FDSIC_BACKEND=numpy   pure-numpy fallback

When numba is not importable the numpy path is used regardless.
benchmarks/bench_kernels.py compares the two on representative sizes.
"""

import os

_requested = os.environ.get("FDSIC_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(
        f"FDSIC_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numba":
    try:
        from . import _kernels_numba as _impl

        _impl._warmup()
        _active = "numba"
    except ImportError:
        from . import _kernels_numpy as _impl

        _active = "numpy"
else:
    from . import _kernels_numpy as _impl

    _active = "numpy"

pa_cubic = _impl.pa_cubic
rx_poly = _impl.rx_poly
quantize_midrise = _impl.quantize_midrise
convolve_trunc = _impl.convolve_trunc
lagged_matrix = _impl.lagged_matrix


def active_backend():
    """Name of the kernel backend in use, 'numba' or 'numpy'."""
    return _active
