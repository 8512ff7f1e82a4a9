"""
Convolution through the Fourier plane
=====================================

A 4f system multiplies two spectra and transforms back. Numerically that
is the convolution theorem, which we check here against the direct sum.
"""

# %%
import numpy as np

from optaccel.field import convolve_direct, convolve_spectral, dft2, idft2, relative_error

rng = np.random.default_rng(0)
a = rng.standard_normal((12, 10)) + 1j * rng.standard_normal((12, 10))
b = rng.standard_normal((12, 10)) + 1j * rng.standard_normal((12, 10))

# %%
# 12 x 10 is not a power of two in either direction; the transform still round-trips
print("round trip error:", relative_error(idft2(dft2(a)), a))

# %%
direct = convolve_direct(a, b)
spectral = convolve_spectral(a, b)
print("spectral vs direct:", relative_error(spectral, direct))

# %%
# A shifted delta just rolls the other grid
d = np.zeros((4, 4))
d[1, 2] = 1
g = np.arange(16.0).reshape(4, 4)
print(convolve_spectral(g, d).real.round(12))
