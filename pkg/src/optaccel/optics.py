"""Simulation of a 4f optical Fourier/convolution accelerator.

The datapath is: digital values -> SLM field (amplitude or phase encoded)
-> optical transform at the camera plane, where the two spectra multiply ->
detector readout -> digital inverse transform. The camera sees ``C = F(A) F(B)``
and, depending on ``DetectorMode``, keeps the full complex value or only its
magnitude.

``far_field_oracle`` is a brute-force Huygens-wavelet summation used to check
that free-space propagation under Fraunhofer conditions really does produce
the DFT magnitude.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import CostGuardError, InvalidInputError
from .field import as_grid, convolve_direct, dft2, idft2

__all__ = [
    "SlmConfig",
    "OpticalSetup",
    "DetectorMode",
    "Encoding",
    "FraunhoferCheck",
    "FourFResult",
    "macro_pixel_average",
    "encode_phase",
    "encode_amplitude",
    "fraunhofer_ok",
    "far_field_oracle",
    "detector_coordinates",
    "simulate_4f_convolution",
    "fidelity",
    "far_field_correlation",
    "fringe_period",
]

ORACLE_MAX_SAMPLES = 64 * 64


@dataclass(frozen=True)
class SlmConfig:
    """Spatial light modulator geometry and drive resolution.

    ``macro_pixel`` groups ``m x m`` physical pixels into one logical pixel
    (1 disables grouping; 3 is the usual crosstalk remedy).
    """

    pixel_rows: int
    pixel_cols: int
    pixel_pitch: float = 15e-6
    bit_depth: int = 8
    macro_pixel: int = 1

    def __post_init__(self):
        if self.pixel_rows < 1 or self.pixel_cols < 1:
            raise InvalidInputError("SLM pixel dimensions must be positive")
        if not self.pixel_pitch > 0:
            raise InvalidInputError("pixel_pitch must be positive")
        if self.bit_depth < 1:
            raise InvalidInputError("bit_depth must be >= 1")
        if self.macro_pixel < 1:
            raise InvalidInputError("macro_pixel must be >= 1")
        if self.macro_pixel > min(self.pixel_rows, self.pixel_cols):
            raise InvalidInputError("macro_pixel larger than the SLM")

    @property
    def aperture_width(self):
        return self.pixel_cols * self.pixel_pitch

    @property
    def levels(self):
        return 2 ** self.bit_depth

    @property
    def effective_shape(self):
        m = self.macro_pixel
        return (self.pixel_rows // m, self.pixel_cols // m)


@dataclass(frozen=True)
class OpticalSetup:
    """Free-space geometry; ``fraunhofer_margin`` is how much larger "much larger" is."""

    wavelength: float = 632.8e-9
    propagation_distance: float = 1.0
    fraunhofer_margin: float = 10.0

    def __post_init__(self):
        if not self.wavelength > 0:
            raise InvalidInputError("wavelength must be positive")
        if not self.propagation_distance > 0:
            raise InvalidInputError("propagation_distance must be positive")
        if not self.fraunhofer_margin >= 1:
            raise InvalidInputError("fraunhofer_margin must be >= 1")


class DetectorMode(enum.Enum):
    IDEAL_COMPLEX = "ideal_complex"
    MAGNITUDE = "magnitude"
    INTENSITY = "intensity"


class Encoding(enum.Enum):
    AMPLITUDE = "amplitude"
    PHASE = "phase"


@dataclass(frozen=True)
class FraunhoferCheck:
    valid: bool
    margin_a: float
    margin_a2_over_lambda: float


@dataclass(frozen=True)
class FourFResult:
    result: np.ndarray
    fidelity: float
    ground_truth: np.ndarray


def _check_values(values, slm):
    v = np.array(values, dtype=float)
    if v.ndim != 2 or v.size == 0:
        raise InvalidInputError(f"values must be a non-empty 2D grid, got shape {v.shape}")
    if v.shape != (slm.pixel_rows, slm.pixel_cols):
        raise InvalidInputError(
            f"values shape {v.shape} does not match SLM {(slm.pixel_rows, slm.pixel_cols)}"
        )
    if not np.all(np.isfinite(v)) or v.min() < 0.0 or v.max() > 1.0:
        raise InvalidInputError("values must lie in [0, 1]")
    return v


def macro_pixel_average(values, m):
    """Average non-overlapping ``m x m`` blocks; trailing partial blocks are dropped."""
    v = np.asarray(values, dtype=float)
    rows, cols = v.shape[0] // m, v.shape[1] // m
    if rows == 0 or cols == 0:
        raise InvalidInputError(f"grid {v.shape} smaller than macro pixel {m}")
    v = v[: rows * m, : cols * m]
    return v.reshape(rows, m, cols, m).mean(axis=(1, 3))


def _drive_values(values, slm):
    v = _check_values(values, slm)
    if slm.macro_pixel > 1:
        v = macro_pixel_average(v, slm.macro_pixel)
    return v


def quantize(values, bit_depth):
    """Map [0, 1] onto integer drive codes ``0 .. 2**bit_depth - 1``."""
    top = 2 ** bit_depth - 1
    return np.rint(np.asarray(values, dtype=float) * top).astype(np.int64)


def encode_phase(values, slm):
    """Phase-encode values as a unit-amplitude field.

    Values are block-averaged when ``slm.macro_pixel > 1``, quantized to
    ``2**bit_depth`` codes, and code ``q`` becomes phase ``2 pi q / 2**bit_depth``.
    The top code therefore sits one step short of ``2 pi``.
    """
    v = _drive_values(values, slm)
    codes = quantize(v, slm.bit_depth)
    return np.exp(2j * np.pi * codes / slm.levels)


def encode_amplitude(values, slm):
    """Amplitude-encode values: the field carries the (block-averaged) values exactly."""
    return _drive_values(values, slm).astype(complex)


def fraunhofer_ok(setup, slm):
    """Test ``D >> a`` and ``D >> a^2 / lambda`` with "much greater" = ``margin`` times."""
    a = slm.aperture_width
    d = setup.propagation_distance
    r1 = d / a
    r2 = d / (a * a / setup.wavelength)
    k = setup.fraunhofer_margin
    return FraunhoferCheck(valid=bool(r1 >= k and r2 >= k), margin_a=r1, margin_a2_over_lambda=r2)


def detector_coordinates(setup, slm, n):
    """Detector sample positions (meters) along one axis.

    ``n`` samples span one full diffraction order width ``lambda D / pitch``
    centred on the optical axis, so sample ``j`` sits at spatial frequency
    index ``j - n // 2`` when ``n`` equals the aperture size.
    """
    span = setup.wavelength * setup.propagation_distance / slm.pixel_pitch
    return (np.arange(n) - n // 2) * (span / n)


def far_field_oracle(aperture, setup, slm, detector_samples):
    """Huygens-wavelet superposition on a detector plane at distance D.

    Every aperture pixel radiates a spherical wavelet ``t exp(ikr) / r`` from
    its centre; the detector sums them. Cost is
    ``O(aperture pixels * detector samples)``, so both sides are capped.

    Parameters
    ----------
    aperture : array_like
        Complex transmission of each SLM pixel. Shape must equal the SLM's
        pixel shape.
    detector_samples : tuple of int
        ``(rows, cols)`` of detector sample points, laid out by
        :func:`detector_coordinates`.

    Returns
    -------
    numpy.ndarray
        Real intensity ``|sum|^2`` of shape ``detector_samples``.
    """
    t = as_grid(aperture, "aperture")
    if t.shape != (slm.pixel_rows, slm.pixel_cols):
        raise InvalidInputError(f"aperture shape {t.shape} does not match SLM")
    n_rows, n_cols = (int(s) for s in detector_samples)
    if n_rows < 1 or n_cols < 1:
        raise InvalidInputError("detector_samples must be positive")
    if n_rows * n_cols > ORACLE_MAX_SAMPLES and t.size > ORACLE_MAX_SAMPLES:
        raise CostGuardError(
            f"{n_rows}x{n_cols} samples against a {t.shape[0]}x{t.shape[1]} aperture "
            "exceeds the brute-force budget"
        )

    k = 2 * np.pi / setup.wavelength
    d = setup.propagation_distance
    p = slm.pixel_pitch
    ys = (np.arange(t.shape[0]) - (t.shape[0] - 1) / 2) * p
    xs = (np.arange(t.shape[1]) - (t.shape[1] - 1) / 2) * p
    open_rows, open_cols = np.nonzero(t)
    src_y = ys[open_rows]
    src_x = xs[open_cols]
    amp = t[open_rows, open_cols]

    det_y = detector_coordinates(setup, slm, n_rows)
    det_x = detector_coordinates(setup, slm, n_cols)
    out = np.empty((n_rows, n_cols))
    for i, y in enumerate(det_y):
        dy2 = (y - src_y) ** 2
        for j, x in enumerate(det_x):
            rho2 = dy2 + (x - src_x) ** 2
            r = np.sqrt(d * d + rho2)
            # phase relative to k*D; r - D from rho^2/(r + D) avoids cancellation
            field = np.sum(amp * np.exp(1j * k * (rho2 / (r + d))) / r)
            out[i, j] = abs(field) ** 2
    return out


def far_field_correlation(aperture, setup, slm):
    """Pearson correlation between the Huygens oracle and ``|dft2(aperture)|^2``.

    The detector is sampled at exactly the aperture's DFT frequencies, so the
    two grids line up element for element after an ``fftshift``.
    """
    t = as_grid(aperture, "aperture")
    oracle = far_field_oracle(t, setup, slm, t.shape)
    spectrum = np.abs(np.fft.fftshift(dft2(t))) ** 2
    return float(np.corrcoef(oracle.ravel(), spectrum.ravel())[0, 1])


def fringe_period(intensity, sample_pitch):
    """Mean spacing between interference maxima of a 1D intensity trace.

    Peaks are located to sub-sample accuracy by a parabola through each local
    maximum and its two neighbours. Returns NaN with fewer than two peaks.
    """
    y = np.asarray(intensity, dtype=float)
    inner = (y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])
    idx = np.nonzero(inner)[0] + 1
    peaks = []
    for i in idx:
        left, mid, right = y[i - 1], y[i], y[i + 1]
        denom = left - 2 * mid + right
        peaks.append(i + (0.5 * (left - right) / denom if denom != 0 else 0.0))
    if len(peaks) < 2:
        return float("nan")
    return float(np.mean(np.diff(peaks)) * sample_pitch)


def fidelity(result, truth):
    """Normalized inner-product magnitude ``|<r, g>| / (|r| |g|)`` clamped to [0, 1].

    Two all-zero grids agree perfectly (1.0); one zero grid against a nonzero
    one scores 0.0.
    """
    r = np.ravel(result)
    g = np.ravel(truth)
    nr = np.linalg.norm(r)
    ng = np.linalg.norm(g)
    if nr == 0 and ng == 0:
        return 1.0
    if nr == 0 or ng == 0:
        return 0.0
    return float(min(1.0, abs(np.vdot(g, r)) / (nr * ng)))


def simulate_4f_convolution(
    a_values,
    b_values,
    slm,
    mode=DetectorMode.IDEAL_COMPLEX,
    encoding=Encoding.AMPLITUDE,
):
    """Run both operands through the optical convolution pipeline.

    The spectra of the two encoded fields multiply at the camera. The
    detector keeps ``C`` itself (``IDEAL_COMPLEX``), ``|C|`` (``MAGNITUDE``), or
    ``sqrt(|C|^2)`` (``INTENSITY``, identical to magnitude without noise). A
    digital inverse transform follows.

    Fidelity is measured against ``convolve_direct`` of the block-averaged
    digital values, the computation the user asked for, so phase encoding
    scores low even though the optics are exact.
    """
    mode = DetectorMode(mode)
    encoding = Encoding(encoding)
    encode = encode_amplitude if encoding is Encoding.AMPLITUDE else encode_phase
    a_field = encode(a_values, slm)
    b_field = encode(b_values, slm)

    c = dft2(a_field) * dft2(b_field)
    if mode is DetectorMode.MAGNITUDE:
        c = np.abs(c).astype(complex)
    elif mode is DetectorMode.INTENSITY:
        c = np.sqrt(np.abs(c) ** 2).astype(complex)
    result = idft2(c)

    truth = convolve_direct(_drive_values(a_values, slm), _drive_values(b_values, slm))
    return FourFResult(result=result, fidelity=fidelity(result, truth), ground_truth=truth)
