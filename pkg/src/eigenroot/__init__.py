"""Eigenpolynomials of degenerate exactly-solvable operators: exact
construction, root growth, disc inequalities and the limiting Cauchy-transform
curve."""

__version__ = "0.1.0"

from .dsl import OperatorSyntaxError, ValidationError, format_operator, parse_operator, parse_polynomial
from .eigen import EigenPair, SpectralCollision, eigenpolynomial, verify_eigen
from .operators import Classification, DifferentialOperator, Kind, classify, eigenvalue
from .poly import ExactPolynomial
from .roots import NoConvergence, RootSet, find_roots

__all__ = [
    "Classification", "DifferentialOperator", "EigenPair", "ExactPolynomial", "Kind", "NoConvergence",
    "OperatorSyntaxError", "RootSet", "SpectralCollision", "ValidationError", "classify", "eigenpolynomial",
    "eigenvalue", "find_roots", "format_operator", "parse_operator", "parse_polynomial", "verify_eigen",
]
