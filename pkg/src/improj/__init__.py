"""Exact imaginary projections of complex conics and quadrics."""

from .errors import ImprojError, ParseError, PreconditionError
from .polycore import AffineTransform, MultiPoly, RationalComplex, parse_poly

__version__ = "0.1.0"

__all__ = [
    "AffineTransform",
    "ImprojError",
    "MultiPoly",
    "ParseError",
    "PreconditionError",
    "RationalComplex",
    "parse_poly",
    "__version__",
]
