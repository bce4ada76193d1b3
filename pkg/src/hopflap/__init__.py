"""Spectral toolkit for the horizontal Laplacian on the charge-k Hopf bundles S^3 -> S^2."""

__version__ = "0.1.0"

from .su2 import GroupElement, EulerAngles, VectorField
from .spectrum import Section

__all__ = ["GroupElement", "EulerAngles", "VectorField", "Section", "__version__"]
