"""Laurent inversion: from Laurent polynomial mirrors to toric complete intersections."""

from .polynomial import LaurentPolynomial, classical_period, parse

__version__ = "0.1.0"

__all__ = ["LaurentPolynomial", "classical_period", "parse"]
