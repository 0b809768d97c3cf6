"""Self-interference cancellation: analog subtraction of the dominant
coupling tap, lagged regression matrices, least-squares channel
estimation, and the digital canceller variants.

Variants differ only in where the reference streams come from and
which basis expansion is applied:

    ref-rx         auxiliary receiver captures, identity basis
    linear         known transmit samples, identity basis
    widely-linear  known transmit samples, {x, conj(x)}
    nonlinear      known transmit samples, odd-order terms {x, x|x|^2, ...}
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import backend
from .units import lin_to_db
from .waveform import ComplexSignal, MimoChannel

CANCELLERS = ("ref-rx", "linear", "widely-linear", "nonlinear")


class EstimationError(RuntimeError):
    """Raised when the least-squares system is rank-deficient or too
    ill-conditioned to trust. ``condition`` holds the 2-norm condition
    estimate when one is available."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


def _samples_of(x):
    if isinstance(x, ComplexSignal):
        return x.samples
    return np.asarray(x, dtype=np.complex128)


def _identity(x):
    return x


def _basis_functions(variant, max_order):
    """(name, callable) pairs for a canceller variant, in block order."""
    if variant in ("ref-rx", "linear"):
        return (("x", _identity),)
    if variant == "widely-linear":
        return (("x", _identity), ("conj", np.conj))
    if variant == "nonlinear":
        if max_order < 3 or max_order % 2 == 0:
            raise ValueError("max_order must be an odd integer >= 3")
        funcs = [("x", _identity)]
        for order in range(3, max_order + 1, 2):
            k = order - 1
            funcs.append((f"x|x|^{k}", lambda x, k=k: x * np.abs(x) ** k))
        return tuple(funcs)
    raise ValueError(f"unknown variant {variant!r}; expected one of {CANCELLERS}")


def _basis_callable(name):
    if name == "x":
        return _identity
    if name == "conj":
        return np.conj
    if name.startswith("x|x|^"):
        k = int(name[5:])
        return lambda x, k=k: x * np.abs(x) ** k
    raise ValueError(f"unknown basis tag {name!r}")


@dataclass(frozen=True)
class RegressionMatrix:
    """Horizontally stacked lagged blocks, one per (branch, basis).

    Row r of block b holds the block's stream at sample indices
    m_taps-1+r down to r, so column c within the block is the stream
    delayed by c samples. Blocks are ordered branch-major: all bases
    of branch 0, then all bases of branch 1, and so on.
    """

    matrix: np.ndarray
    m_taps: int
    block_tags: tuple  # (branch, basis_index, basis_name) per block

    @property
    def n_blocks(self):
        return len(self.block_tags)


@dataclass(frozen=True)
class ChannelEstimateSet:
    """Stacked tap estimates, one length-m_taps segment per block of
    the regression matrix that produced them."""

    h_hat: np.ndarray
    m_taps: int
    block_tags: tuple
    n_samples: int
    variant: str
    calibrated: bool

    def block_taps(self, index):
        """Tap vector of one (branch, basis) block."""
        m = self.m_taps
        return self.h_hat[index * m : (index + 1) * m]


def build_regression_matrix(refs, m_taps, variant, max_order=3):
    """Stack lagged reference blocks for a canceller variant.

    Parameters
    ----------
    refs : list of ComplexSignal or ndarray
        One stream per transmit branch, equal lengths N >= m_taps.
    m_taps : int
        Channel-model length per block.
    variant : str
        One of CANCELLERS; selects the basis expansion.
    max_order : int
        Highest odd distortion order for the nonlinear variant.

    Returns
    -------
    RegressionMatrix
        (N - m_taps + 1) rows, n_blocks * m_taps columns.
    """
    if m_taps < 1:
        raise ValueError("m_taps must be >= 1")
    streams = [np.ascontiguousarray(_samples_of(r)) for r in refs]
    if not streams:
        raise ValueError("refs must contain at least one stream")
    n = streams[0].shape[0]
    if any(s.shape[0] != n for s in streams):
        raise ValueError("reference streams must share one length")
    if n < m_taps:
        raise ValueError(f"reference streams shorter than m_taps ({n} < {m_taps})")

    funcs = _basis_functions(variant, max_order)
    blocks = []
    tags = []
    for j, stream in enumerate(streams):
        for b, (name, func) in enumerate(funcs):
            blocks.append(
                backend.lagged_matrix(np.ascontiguousarray(func(stream)), m_taps)
            )
            tags.append((j, b, name))
    return RegressionMatrix(np.hstack(blocks), m_taps, tuple(tags))


def ls_estimate(y, X, variant="linear", calibrated=False, cond_threshold=1e8):
    """Least-squares tap estimate from a capture and its regression
    matrix.

    ``y`` may be the full capture (length N, windowed internally to
    samples m_taps-1 .. N-1) or already windowed to the matrix's row
    count. Solved with an orthogonal factorization, never the literal
    normal-equations inverse.

    Raises
    ------
    EstimationError
        Rank deficiency, condition estimate above ``cond_threshold``,
        or non-finite coefficients.
    """
    y_s = _samples_of(y)
    rows, cols = X.matrix.shape
    if y_s.shape[0] == rows:
        y_win = y_s
    elif y_s.shape[0] == rows + X.m_taps - 1:
        y_win = y_s[X.m_taps - 1 :]
    else:
        raise ValueError(
            f"capture length {y_s.shape[0]} matches neither the matrix rows "
            f"({rows}) nor the full window ({rows + X.m_taps - 1})"
        )
    if rows < cols:
        raise EstimationError(f"underdetermined system ({rows} rows, {cols} columns)")

    # Columns carry wildly different physical units (e.g. x vs x|x|^2),
    # so equilibrate to unit norm before judging collinearity.
    scales = np.linalg.norm(X.matrix, axis=0)
    scales[scales == 0.0] = 1.0
    scaled, _, rank, singular = np.linalg.lstsq(X.matrix / scales, y_win, rcond=None)
    solution = scaled / scales
    condition = (
        float(singular[0] / singular[-1]) if singular[-1] > 0 else float("inf")
    )
    if rank < cols or condition > cond_threshold:
        raise EstimationError(
            f"regression matrix condition {condition:.3g} exceeds "
            f"{cond_threshold:.3g} (rank {rank} of {cols})",
            condition=condition,
        )
    if not np.all(np.isfinite(solution)):
        raise EstimationError("non-finite coefficients from solver")
    return ChannelEstimateSet(
        h_hat=solution,
        m_taps=X.m_taps,
        block_tags=X.block_tags,
        n_samples=y_s.shape[0] if y_s.shape[0] != rows else rows + X.m_taps - 1,
        variant=variant,
        calibrated=calibrated,
    )


def digital_cancel(y, refs, est):
    """Subtract regenerated interference from a capture.

    The reference streams are expanded with the basis functions named
    in the estimate's block tags, filtered with the estimated taps,
    and subtracted over the whole capture.
    """
    streams = [np.ascontiguousarray(_samples_of(r)) for r in refs]
    n_branches = 1 + max(tag[0] for tag in est.block_tags)
    if len(streams) != n_branches:
        raise ValueError(
            f"estimate covers {n_branches} branches, got {len(streams)} references"
        )
    if est.h_hat.shape[0] != len(est.block_tags) * est.m_taps:
        raise ValueError("estimate length does not match its block layout")
    y_s = _samples_of(y)
    if any(s.shape[0] != y_s.shape[0] for s in streams):
        raise ValueError("references must cover the full capture")

    regenerated = np.zeros_like(y_s)
    for index, (branch, _, name) in enumerate(est.block_tags):
        taps = est.block_taps(index)
        expanded = np.ascontiguousarray(_basis_callable(name)(streams[branch]))
        regenerated += backend.convolve_trunc(expanded, taps)
    out = y_s - regenerated
    if isinstance(y, ComplexSignal):
        return y.with_samples(out)
    return out


def run_canceller(
    variant,
    rx_capture,
    tx_data,
    ref_rx_captures,
    m_taps,
    n_est,
    max_order=3,
    calibrated=False,
    cond_threshold=1e8,
):
    """Estimate over the first ``n_est`` samples, cancel over the whole
    capture.

    ref-rx uses the auxiliary receiver captures as references; the
    other variants use the known transmit samples.

    Returns
    -------
    (ComplexSignal, ChannelEstimateSet)
        The cancelled capture and the estimate that produced it.
    """
    if variant not in CANCELLERS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {CANCELLERS}")
    refs = ref_rx_captures if variant == "ref-rx" else tx_data
    n = len(_samples_of(rx_capture))
    if n_est > n:
        raise ValueError(f"n_est ({n_est}) exceeds capture length ({n})")
    if n_est < m_taps:
        raise ValueError(f"n_est ({n_est}) shorter than m_taps ({m_taps})")

    est_refs = [_samples_of(r)[:n_est] for r in refs]
    X = build_regression_matrix(est_refs, m_taps, variant, max_order)
    est = ls_estimate(
        _samples_of(rx_capture)[:n_est],
        X,
        variant=variant,
        calibrated=calibrated,
        cond_threshold=cond_threshold,
    )
    return digital_cancel(rx_capture, refs, est), est


class RfCancelResult(NamedTuple):
    """Analog cancellation output plus what it actually achieved."""

    signal: ComplexSignal
    achieved_db: float
    shortfall: bool


def rf_cancel(y_rx, tx_pa_outputs, channel: MimoChannel, a_rf_db, rx_index=0):
    """Subtract scaled copies of the transmit outputs through the
    dominant channel tap.

    One common scale is applied to all branches, chosen so the total
    capture power drops by exactly ``a_rf_db``. When the dominant-tap
    subtraction cannot reach that (bounded by the scattered-path
    power), the best achievable scale is used and ``shortfall`` is set.
    The residual stays a linear filtering of each transmit output, so
    digital cancellation downstream remains well-posed.
    """
    if a_rf_db < 0:
        raise ValueError("a_rf_db must be >= 0")
    if len(tx_pa_outputs) != channel.n_tx:
        raise ValueError("one transmit output per channel branch required")
    y = _samples_of(y_rx)
    if a_rf_db == 0:
        return RfCancelResult(_as_signal(y_rx, y.copy()), 0.0, False)

    delay = channel.los_delay
    composite = np.zeros_like(y)
    for j, tx in enumerate(tx_pa_outputs):
        x = _samples_of(tx)
        if x.shape[0] != y.shape[0]:
            raise ValueError("transmit outputs must cover the capture")
        tap = channel.taps[rx_index, j, delay]
        if delay == 0:
            composite += tap * x
        else:
            composite[delay:] += tap * x[:-delay]

    p0 = float(np.mean(np.abs(y) ** 2))
    c = float(np.mean(np.abs(composite) ** 2))
    b = float(np.mean((y * np.conj(composite)).real))
    if c == 0.0 or p0 == 0.0:
        return RfCancelResult(_as_signal(y_rx, y.copy()), 0.0, True)

    alpha = 10.0 ** (a_rf_db / 10.0)
    target_drop = p0 * (1.0 - 1.0 / alpha)
    disc = b * b - c * target_drop
    if disc >= 0.0:
        beta = (b - np.sqrt(disc)) / c
        achieved = float(a_rf_db)
        shortfall = False
    else:
        # best achievable: full projection onto the dominant composite
        beta = b / c
        residual = p0 - b * b / c
        achieved = (
            float(lin_to_db(p0 / residual)) if residual > 0 else float("inf")
        )
        shortfall = True
    return RfCancelResult(_as_signal(y_rx, y - beta * composite), achieved, shortfall)


def _as_signal(template, samples):
    if isinstance(template, ComplexSignal):
        return template.with_samples(samples)
    return samples


def write_estimates_csv(path, estimate_sets):
    """One coefficient per row: rx,tx,basis,lag,re,im.

    ``estimate_sets`` is one ChannelEstimateSet per receive chain, in
    receive-chain order.
    """
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rx", "tx", "basis", "lag", "re", "im"])
        for rx, est in enumerate(estimate_sets):
            for index, (branch, basis_index, _) in enumerate(est.block_tags):
                taps = est.block_taps(index)
                for lag in range(est.m_taps):
                    writer.writerow(
                        [
                            rx,
                            branch,
                            basis_index,
                            lag,
                            f"{taps[lag].real:.17g}",
                            f"{taps[lag].imag:.17g}",
                        ]
                    )
