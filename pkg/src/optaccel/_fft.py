"""One-dimensional FFT kernels working along the last axis.

Power-of-two lengths use a vectorized radix-2 decimation-in-time transform.
Every other length goes through Bluestein's chirp-z algorithm, which
re-expresses the DFT as a circular convolution of power-of-two length.
"""

import numpy as np

_BASE = 16


def _twiddle(n):
    # k*j reduced mod n before scaling keeps the angle exact for large n
    k = np.arange(n)
    return np.exp(-2j * np.pi * (np.outer(k, k) % n) / n)


def _fft_pow2(x):
    n = x.shape[-1]
    lead = x.shape[:-1]
    base = min(n, _BASE)
    # small DFTs over the strided sub-sequences, then butterfly them together
    out = _twiddle(base) @ x.reshape(lead + (base, n // base))
    while out.shape[-2] < n:
        half = out.shape[-1] // 2
        even = out[..., :half]
        odd = out[..., half:]
        m = out.shape[-2]
        w = np.exp(-1j * np.pi * np.arange(m) / m)[:, None]
        out = np.concatenate([even + w * odd, even - w * odd], axis=-2)
    return out.reshape(lead + (n,))


def _chirp(n):
    k = np.arange(n, dtype=np.int64)
    return np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)


def _fft_bluestein(x):
    n = x.shape[-1]
    m = 1 << (2 * n - 2).bit_length()
    w = _chirp(n)
    a = np.zeros(x.shape[:-1] + (m,), dtype=complex)
    a[..., :n] = x * w
    b = np.zeros(m, dtype=complex)
    b[:n] = np.conj(w)
    b[m - n + 1:] = np.conj(w[1:][::-1])
    conv = _ifft_pow2(_fft_pow2(a) * _fft_pow2(b))
    return w * conv[..., :n]


def _ifft_pow2(x):
    return np.conj(_fft_pow2(np.conj(x))) / x.shape[-1]


def fft(x):
    """Unnormalized forward DFT of ``x`` along its last axis."""
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    if n & (n - 1) == 0:
        return _fft_pow2(x)
    return _fft_bluestein(x)


def ifft(x):
    """Inverse DFT along the last axis, scaled by 1/n."""
    x = np.asarray(x, dtype=complex)
    return np.conj(fft(np.conj(x))) / x.shape[-1]
