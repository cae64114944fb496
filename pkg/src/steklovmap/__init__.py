"""Steklov eigenvalues of planar domains given by conformal maps of the unit disk."""

from .conformal import ConformalShape, DegenerateShapeError
from .shape_opt import OptimizationState, OptimizerConfig, OptimizerHalt, optimize
from .spectral import FourierSeries
from .steklov import EigenSolveError, SteklovSpectrum, spectrum, steklov_eigenvalues

__all__ = [
    "ConformalShape",
    "DegenerateShapeError",
    "EigenSolveError",
    "FourierSeries",
    "OptimizationState",
    "OptimizerConfig",
    "OptimizerHalt",
    "SteklovSpectrum",
    "optimize",
    "spectrum",
    "steklov_eigenvalues",
]

__version__ = "0.1.0"
