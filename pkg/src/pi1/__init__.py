"""Exact symbolic toolkit for the Painlevé I hierarchy: minimal-model and isomonodromic sides."""

from .exact import Q, MultiPoly
from .series import LambdaSeries

__version__ = "0.1.0"

__all__ = ["Q", "MultiPoly", "LambdaSeries", "__version__"]
