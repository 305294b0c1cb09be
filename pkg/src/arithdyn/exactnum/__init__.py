"""Exact integer/rational arithmetic, polynomials, resultants, factoring, roots."""

from .factor import factor_integer, is_probable_prime, valuation
from .poly import BinaryForm, IntPoly, content_of
from .precision import DEFAULT_PREC, context
from .resultant import bareiss_det, resultant, sylvester_cofactors, sylvester_matrix
from .roots import ComplexApprox, NumericError, complex_roots

__all__ = [
    "BinaryForm",
    "ComplexApprox",
    "DEFAULT_PREC",
    "IntPoly",
    "NumericError",
    "bareiss_det",
    "complex_roots",
    "content_of",
    "context",
    "factor_integer",
    "is_probable_prime",
    "resultant",
    "sylvester_cofactors",
    "sylvester_matrix",
    "valuation",
]
