"""Simulation and analysis toolkit for analog optical Fourier/convolution accelerators."""

from .errors import CostGuardError, InvalidInputError, ParseError

__version__ = "0.1.0"

__all__ = ["CostGuardError", "InvalidInputError", "ParseError", "__version__"]
