"""Exact and high-precision computation of the spectral zeta functions of the
Dolbeault Laplacians on complex projective space, their special values,
zeta-regularized derivatives and the holomorphic analytic torsion."""
from __future__ import annotations

from .exact_core import QPolynomial, QPowerSeries, Rational, bernoulli_number, bernoulli_polynomial
from .genfun import StructuralError, r_polynomial, t_numerator
from .special_values import xi_value_neg, zeta_q_neg, zetabar_neg
from .spectrum import SpectrumParams, alpha, eigenvalue, multiplicity
from .torsion_engine import ExtZetaExpr, torsion_expr, zetabar_prime_expr

__version__ = "0.1.0"

__all__ = [
    "ExtZetaExpr",
    "QPolynomial",
    "QPowerSeries",
    "Rational",
    "SpectrumParams",
    "StructuralError",
    "alpha",
    "bernoulli_number",
    "bernoulli_polynomial",
    "eigenvalue",
    "multiplicity",
    "r_polynomial",
    "t_numerator",
    "torsion_expr",
    "xi_value_neg",
    "zeta_q_neg",
    "zetabar_neg",
    "zetabar_prime_expr",
]
