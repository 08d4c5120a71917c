"""Pseudo-spectral exponential integrators for chiral blue-phase dynamics."""

from .grid import Grid, SpectralField, TensorField
from .kernels import BACKEND as KERNEL_BACKEND
from .params import DimensionlessParams, ModelParams, StabilizedParams

__all__ = [
    "Grid",
    "TensorField",
    "SpectralField",
    "ModelParams",
    "StabilizedParams",
    "DimensionlessParams",
    "KERNEL_BACKEND",
]

__version__ = "0.1.0"
