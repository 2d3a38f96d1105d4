"""Exact values at non-positive integers.

The auxiliary Dirichlet series

    xi_q(s)  = sum_{k>=q} alpha(k) (k + a)^-s,   a = n + 1 - q,

is reduced through R_{n,q} to the multiple Hurwitz zeta

    zeta_{2n-1}(s, A) = sum_{k>=0} binom(k+2n-2, 2n-2) (k + A)^-s
                      = sum_i b_i sum_p (-A)^(i-p) C(i, p) zeta(s - p, A),

whose values at s = -l are Bernoulli-polynomial rationals.  zetabar_q(-m)
then follows from the binomial-splitting series for zetabar_q around s = -m.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exact_core import bernoulli_number, bernoulli_polynomial, rising_binomial_coeffs
from .genfun import r_polynomial, zq_constant
from .spectrum import SpectrumParams, multiplicity_scale

__all__ = [
    "multi_hurwitz_neg",
    "multi_hurwitz_residue",
    "hurwitz_neg",
    "beta_coeff",
    "gamma_residue",
    "xi_value_neg",
    "xi_value_neg_bernoulli",
    "XiTable",
    "xi_table",
    "zetabar_neg",
    "series_value_neg",
    "zeta_q_neg",
    "p1_zeta_neg",
    "CORRECTED",
    "PRINTED",
]

CORRECTED = "corrected"
PRINTED = "printed"


def hurwitz_neg(l: int, a) -> Fraction:
    """zeta(-l, a) = -B_{l+1}(a) / (l + 1)."""
    return -bernoulli_polynomial(l + 1)(Fraction(a)) / (l + 1)


def _b(n: int):
    return rising_binomial_coeffs(2 * n - 2)


def multi_hurwitz_neg(n: int, l: int, a: int) -> Fraction:
    if a <= 0:
        raise ValueError("Hurwitz parameter must be a positive integer")
    b = _b(n)
    total = Fraction(0)
    for i in range(2 * n - 1):
        for p in range(i + 1):
            total += b[i] * (-a) ** (i - p) * comb(i, p) * hurwitz_neg(l + p, a)
    return total


def multi_hurwitz_residue(n: int, l: int, a: int) -> Fraction:
    if not 1 <= l <= 2 * n - 1:
        raise ValueError(f"residue index l={l} outside 1..{2 * n - 1}")
    b = _b(n)
    return sum(
        (b[i] * (-a) ** (i - l + 1) * comb(i, l - 1) for i in range(l - 1, 2 * n - 1)),
        Fraction(0),
    )


def beta_coeff(p: SpectrumParams, l: int, i: int, pp: int) -> Fraction:
    n, q, a = p.n, p.q, p.shift
    if not 0 <= pp <= i <= 2 * n - 2:
        raise ValueError(f"need 0 <= pp <= i <= 2n-2, got pp={pp}, i={i}")
    return sum(
        (
            c * (q - n - 1 - k) ** (i - pp) * bernoulli_polynomial(l + pp + 1)(Fraction(k + a))
            for k, c in r_polynomial(p).items()
        ),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def gamma_residue(p: SpectrumParams, l: int) -> Fraction:
    """Residue of xi_q at s = l (zero outside 1..2n-1)."""
    if not 1 <= l <= 2 * p.n - 1:
        return Fraction(0)
    return sum(
        (c * multi_hurwitz_residue(p.n, l, k + p.shift) for k, c in r_polynomial(p).items()),
        Fraction(0),
    )


@lru_cache(maxsize=None)
def xi_value_neg(p: SpectrumParams, l: int) -> Fraction:
    """xi_q(-l) via the multiple Hurwitz reduction."""
    total = sum(
        (c * multi_hurwitz_neg(p.n, l, k + p.shift) for k, c in r_polynomial(p).items()),
        Fraction(0),
    )
    return total - zq_constant(p) * Fraction(p.n + 1) ** l


def xi_value_neg_bernoulli(p: SpectrumParams, l: int, sign: int = -1) -> Fraction:
    """xi_q(-l) assembled from the beta table.

    ``sign=-1`` carries the minus of zeta(-l, A) = -B_{l+1}(A)/(l+1);
    ``sign=+1`` reproduces the printed assembly, which omits it.
    """
    n = p.n
    b = _b(n)
    total = Fraction(0)
    for i in range(2 * n - 1):
        for pp in range(i + 1):
            total += b[i] * comb(i, pp) * beta_coeff(p, l, i, pp) / (pp + l + 1)
    head = Fraction(comb(n + p.q - 1, n), p.q) * Fraction(n + 1) ** l / (n + 1)
    return sign * total - head


@dataclass(frozen=True)
class XiTable:
    params: SpectrumParams
    values: dict = field(hash=False)
    residues: dict = field(hash=False)


def xi_table(p: SpectrumParams, l_max: int) -> XiTable:
    return XiTable(
        p,
        {l: xi_value_neg(p, l) for l in range(l_max + 1)},
        {l: gamma_residue(p, l) for l in range(1, 2 * p.n)},
    )


def _xi_at(p: SpectrumParams, x: int) -> Fraction:
    if x > 0:
        raise ValueError(f"xi_q({x}) is not a Bernoulli rational")
    return xi_value_neg(p, -x)


def series_value_neg(p: SpectrumParams, m: int, variant: str = CORRECTED) -> Fraction:
    """Value at s = -m of sum_j a^j Gamma(s+j-1)(2s-2+j)/(j! Gamma(s)) xi_q(2s+j-1).

    This is zetabar_q(-m) / (n!)^2.  The corrected variant keeps the exact
    limit of each term; the printed variant uses the 1/m first-sum weights
    (undefined at m = 0) and drops the 1/2 on the residue terms.
    """
    n, a = p.n, p.shift
    if m < 0:
        raise ValueError("m must be >= 0")
    total = Fraction(0)
    if variant == CORRECTED:
        for j in range(m + 2):
            coef = Fraction((-1) ** (j + 1) * comb(m + 1, j) * (j - 2 * m - 2), m + 1)
            total += coef * a**j * _xi_at(p, -2 * m + j - 1)
        half = Fraction(1, 2)
    elif variant == PRINTED:
        if m == 0:
            raise ZeroDivisionError("printed first-sum weight 1/m is undefined at m = 0")
        for j in range(2 * m + 2):
            coef = Fraction((-1) ** (j + 1) * comb(m + 1, j), m)
            total += coef * a**j * _xi_at(p, -2 * m + j - 1)
        half = Fraction(1)
    else:
        raise ValueError(f"unknown formula variant {variant!r}")
    tail = Fraction(0)
    for j in range(2 * m + 2, 2 * n + 2 * m + 1):
        w = Fraction(factorial(j - m - 2) * (j - 2 * m - 2), factorial(j))
        tail += a**j * w * gamma_residue(p, j - 1 - 2 * m)
    return total + (-1) ** m * factorial(m) * half * tail


@lru_cache(maxsize=None)
def zetabar_neg(p: SpectrumParams, m: int, variant: str = CORRECTED) -> Fraction:
    return multiplicity_scale(p.n) * series_value_neg(p, m, variant)


def zeta_q_neg(p: SpectrumParams, m: int, variant: str = CORRECTED) -> Fraction:
    return sum(
        (zetabar_neg(SpectrumParams(p.n, c), m, variant) for c in _components(p)),
        Fraction(0),
    )


def _components(p: SpectrumParams) -> list[int]:
    return [p.q, p.q + 1] if p.q < p.n else [p.n]


def p1_zeta_neg(m: int) -> Fraction:
    """Closed Bernoulli-number form of the P^1 function zeta at -m."""
    s = sum(
        ((-1) ** k * comb(m + 1, 2 * m + 2 - k) * bernoulli_number(k) for k in range(m + 1, 2 * m + 3)),
        Fraction(0),
    )
    return -s / (m + 1)
