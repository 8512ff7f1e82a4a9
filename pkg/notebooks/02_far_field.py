"""
Far-field diffraction and the DFT
=================================

Sum Huygens wavelets from every SLM pixel and compare the resulting
intensity with |DFT|^2 of the aperture.
"""

# %%
import numpy as np

from optaccel import optics

setup = optics.OpticalSetup(wavelength=632.8e-9, propagation_distance=10.0)
slm = optics.SlmConfig(16, 16, pixel_pitch=15e-6)
print(optics.fraunhofer_ok(setup, slm))

# %%
aperture = (np.random.default_rng(16).random((16, 16)) < 0.5).astype(float)
print("pearson r:", optics.far_field_correlation(aperture, setup, slm))

# %%
# Bring the detector in close and the correspondence falls apart
near = optics.OpticalSetup(632.8e-9, 0.002)
print(optics.fraunhofer_ok(near, slm))
print("pearson r (near):", optics.far_field_correlation(aperture, near, slm))

# %%
# Double slit: fringe period should be lambda D / d
row = optics.SlmConfig(1, 16, pixel_pitch=15e-6)
slits = np.zeros((1, 16))
slits[0, 5] = slits[0, 8] = 1
trace = optics.far_field_oracle(slits, setup, row, (1, 64))[0]
pitch = np.diff(optics.detector_coordinates(setup, row, 64))[0]
print("measured period:", optics.fringe_period(trace, pitch))
print("lambda D / d:  ", setup.wavelength * setup.propagation_distance / (3 * 15e-6))

# %%
# What a camera sees: magnitude only. The spectral phase is gone.
a = np.random.default_rng(2024).random((8, 8))
b = np.zeros((8, 8))
b[0, 0] = 1
for mode in optics.DetectorMode:
    res = optics.simulate_4f_convolution(a, b, optics.SlmConfig(8, 8), mode)
    print(f"{mode.value:14s} fidelity {res.fidelity:.6f}")

# %%
# Phase-only encoding does not carry amplitudes faithfully either
res = optics.simulate_4f_convolution(a, b, optics.SlmConfig(8, 8), encoding=optics.Encoding.PHASE)
print("phase-encoded fidelity:", res.fidelity)
