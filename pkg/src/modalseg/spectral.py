"""Real-part FFT primitives used by the spectral prompt path.

For a real vector x of length N, re(fft(x))[k] = sum_n x[n] cos(2 pi n k / N),
i.e. multiplication by the symmetric cosine matrix C. Its adjoint is
therefore the same operator, which is what the backward pass applies.
The inverse transform is exposed only as a round-trip oracle; the forward
model path never applies fft followed by ifft.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError

FFT_AXES = ("channel", "token", "both")


def real_fft(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Real part of the DFT along ``axis``; output length equals input length."""
    x = np.asarray(x)
    if x.size == 0:
        raise ShapeError("real_fft requires a non-empty input")
    return np.fft.fft(x, axis=axis).real.astype(x.dtype, copy=False)


def real_fft_adjoint(g: np.ndarray, axis: int = -1) -> np.ndarray:
    """Adjoint of ``real_fft`` for real inputs.

    The cosine matrix C[k, n] = cos(2 pi n k / N) is symmetric, so the
    adjoint is the operator itself.
    """
    return real_fft(g, axis=axis)


def real_fft2(x: np.ndarray) -> np.ndarray:
    """Real part of the 2-D DFT over the last two axes."""
    x = np.asarray(x)
    if x.size == 0:
        raise ShapeError("real_fft2 requires a non-empty input")
    return np.fft.fft2(x, axes=(-2, -1)).real.astype(x.dtype, copy=False)


def real_fft2_adjoint(g: np.ndarray) -> np.ndarray:
    return real_fft2(g)


def apply_real_fft(x: np.ndarray, fft_axis: str) -> np.ndarray:
    """Dispatch real_fft along the configured token/channel axis of (..., N, d)."""
    if fft_axis == "channel":
        return real_fft(x, axis=-1)
    if fft_axis == "token":
        return real_fft(x, axis=-2)
    if fft_axis == "both":
        return real_fft2(x)
    raise ShapeError(f"unknown fft axis {fft_axis!r}")


def apply_real_fft_adjoint(g: np.ndarray, fft_axis: str) -> np.ndarray:
    return apply_real_fft(g, fft_axis)


def inverse_fft_roundtrip(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """ifft(fft(x)) as a verification oracle; equals x to fp tolerance."""
    x = np.asarray(x)
    if x.size == 0:
        raise ShapeError("roundtrip requires a non-empty input")
    return np.fft.ifft(np.fft.fft(x, axis=axis), axis=axis).real.astype(x.dtype, copy=False)
