"""Discrete Fourier machinery for 2D complex grids.

A grid is a 2D ``complex128`` numpy array. Functions here never modify their
inputs. Conventions:

* forward transform: unnormalized sum ``X[u, v] = sum x[m, n] e^{-2 pi i (um/R + vn/C)}``
* inverse transform: conjugate kernel, scaled by ``1/(R*C)``
* convolution: circular (periodic) in both axes

Under these conventions ``idft2(dft2(a) * dft2(b)) == convolve_direct(a, b)``
with no extra scale factor.
"""

import numpy as np

from . import _fft
from .errors import InvalidInputError

__all__ = [
    "as_grid",
    "dft2",
    "idft2",
    "dft2_bruteforce",
    "convolve_direct",
    "convolve_spectral",
    "linear_conv_shape",
    "zero_pad",
    "relative_error",
]


def as_grid(x, name="grid"):
    """Validate ``x`` and return it as a 2D complex128 array (a copy)."""
    arr = np.array(x, dtype=complex)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2D, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInputError(f"{name} is empty")
    return arr


def _same_shape(a, b):
    a = as_grid(a, "a")
    b = as_grid(b, "b")
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def dft2(x, inverse=False):
    """Fast 2D discrete Fourier transform.

    Parameters
    ----------
    x : array_like
        2D grid, any size (non-power-of-two sizes are handled exactly).
    inverse : bool
        Apply the inverse transform, including the ``1/(rows*cols)`` factor.

    Returns
    -------
    numpy.ndarray
        New complex128 grid of the same shape.
    """
    x = as_grid(x)
    step = _fft.ifft if inverse else _fft.fft
    out = step(x)
    return step(out.T).T.copy()


def idft2(x):
    """Shorthand for ``dft2(x, inverse=True)``."""
    return dft2(x, inverse=True)


def dft2_bruteforce(x, inverse=False):
    """Literal double-sum DFT, O((rows*cols)^2).

    Independent of the fast path; used as the reference in validation.
    """
    x = as_grid(x)
    rows, cols = x.shape
    sign = 1.0 if inverse else -1.0
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    out = np.empty_like(x)
    for u in range(rows):
        for v in range(cols):
            # integer products reduced mod size before scaling, for exact angles
            phase = ((u * m) % rows) / rows + ((v * n) % cols) / cols
            out[u, v] = np.sum(x * np.exp(sign * 2j * np.pi * phase))
    if inverse:
        out /= rows * cols
    return out


def convolve_direct(a, b):
    """Circular convolution by the defining sum.

    ``out[i, j] = sum_{k, l} a[k, l] * b[(i - k) % R, (j - l) % C]``. Each
    term of ``a`` shifts a copy of ``b``; no transform is involved.
    """
    a, b = _same_shape(a, b)
    out = np.zeros_like(a)
    rows, cols = a.shape
    for k in range(rows):
        for l in range(cols):
            if a[k, l] != 0:
                out += a[k, l] * np.roll(b, (k, l), axis=(0, 1))
    return out


def convolve_spectral(a, b):
    """Circular convolution through the transform domain."""
    a, b = _same_shape(a, b)
    return idft2(dft2(a) * dft2(b))


def linear_conv_shape(shape_a, shape_b):
    """Smallest grid shape on which circular convolution equals linear.

    Each axis needs at least ``m + n - 1`` samples. Zero-pad both operands to
    this shape (see :func:`zero_pad`) before calling a circular routine.
    """
    return tuple(int(m) + int(n) - 1 for m, n in zip(shape_a, shape_b))


def zero_pad(x, shape):
    """Place ``x`` in the top-left corner of a zero grid of ``shape``."""
    x = as_grid(x)
    if any(s < d for s, d in zip(shape, x.shape)):
        raise InvalidInputError(f"cannot pad {x.shape} down to {shape}")
    out = np.zeros(shape, dtype=complex)
    out[: x.shape[0], : x.shape[1]] = x
    return out


def relative_error(actual, expected):
    """``max|actual - expected| / max|expected|``; absolute if expected is zero."""
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    scale = np.max(np.abs(expected))
    diff = np.max(np.abs(actual - expected))
    return float(diff / scale) if scale > 0 else float(diff)
