"""Coherent-state quantization of the motion on the circle and in the infinite square well."""
from . import circle, kernels, spectra, symbols, well
from ._core import BACKEND
from .errors import (
    ClampWarning,
    CSQuantError,
    DegeneratePointError,
    InvalidParameterError,
    NumericalConsistencyError,
    QuadratureError,
    ShapeMismatchError,
    StructureError,
    TruncationWarning,
)
from .params import Parameters, PhasePoint

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClampWarning",
    "CSQuantError",
    "DegeneratePointError",
    "InvalidParameterError",
    "NumericalConsistencyError",
    "Parameters",
    "PhasePoint",
    "QuadratureError",
    "ShapeMismatchError",
    "StructureError",
    "TruncationWarning",
    "circle",
    "kernels",
    "spectra",
    "symbols",
    "well",
]
