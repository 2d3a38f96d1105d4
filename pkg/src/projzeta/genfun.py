"""Generating functions S_{n,q}, T_{n,q} and the numerator polynomial R_{n,q}.

S_{n,q}(z) = sum_{k>=q} alpha_{n,q}(k) z^k is rational:

    S(z) = R(z) / (1-z)^(2n-1) - C0 z^q,   C0 = binom(n+q-1, n) / (q(n+1)).

R is extracted by multiplying truncated series and checking that every
coefficient past the expected support vanishes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exact_core import QPolynomial, QPowerSeries, partial_fraction_g
from .spectrum import SpectrumParams, alpha

__all__ = [
    "StructuralError",
    "RPolyData",
    "zq_constant",
    "s_series",
    "r_polynomial",
    "t_series",
    "t_numerator",
    "TNumeratorData",
    "printed_t_numerator",
    "ode_residual",
    "ode_constant",
]


class StructuralError(ArithmeticError):
    """A structural identity the computation relies on failed to hold."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


def zq_constant(p: SpectrumParams) -> Fraction:
    """C0 = binom(n+q-1, n) / (q (n+1))."""
    return Fraction(comb(p.n + p.q - 1, p.n), p.q * (p.n + 1))


def s_series(p: SpectrumParams, order: int) -> QPowerSeries:
    if order < p.q:
        raise ValueError("order must be >= q")
    return QPowerSeries(
        [alpha(p, k) if k >= p.q else 0 for k in range(order + 1)], order
    )


def _one_minus_z_pow(e: int) -> QPolynomial:
    return QPolynomial([1, -1]) ** e


@dataclass(frozen=True)
class RPolyData:
    params: SpectrumParams
    c: dict = field(hash=False)
    support_min: int
    support_max: int

    def poly(self) -> QPolynomial:
        top = self.support_max
        return QPolynomial(self.c.get(k, 0) for k in range(top + 1))

    def items(self):
        return sorted(self.c.items())


@lru_cache(maxsize=None)
def r_polynomial(p: SpectrumParams, order: int | None = None) -> RPolyData:
    n, q = p.n, p.q
    order = 6 * n + q if order is None else order
    bound = 2 * n - 1 + q
    if order < bound + 1:
        raise ValueError(f"order {order} too small to test polynomiality past degree {bound}")
    s = s_series(p, order)
    corrected = s + QPowerSeries.from_poly(QPolynomial([0] * q + [zq_constant(p)]), order)
    r = corrected * _one_minus_z_pow(2 * n - 1)
    for k in range(r.order + 1):
        if r[k] and not q <= k <= bound:
            raise StructuralError(
                "claim3.1-polynomiality",
                f"R_{{{n},{q}}} has coefficient {r[k]} at z^{k}, outside [{q}, {bound}]",
            )
    c = {k: r[k] for k in range(q, bound + 1) if r[k]}
    if not c:
        raise StructuralError("claim3.1-polynomiality", "R vanishes identically")
    return RPolyData(p, c, min(c), max(c))


def t_series(p: SpectrumParams, order: int) -> QPowerSeries:
    n, q = p.n, p.q
    return QPowerSeries(
        [comb(k + q + n, k + q) * comb(k + n, k) for k in range(order + 1)], order
    )


@dataclass(frozen=True)
class TNumeratorData:
    numerator: QPolynomial
    printed_numerator: QPolynomial
    printed_agrees: bool


def printed_t_numerator(p: SpectrumParams) -> QPolynomial:
    """(1-z)^(2n+1) times the printed closed form P/(1-z)^(2n+1) - binom(n+q-1, n),
    with P(z) = sum_{k=0}^{a} a_{n+1,k+1} binom(a, k) (1-z)^k z^(a-k)."""
    n, q, a = p.n, p.q, p.shift
    g = partial_fraction_g(n)  # g[k] = a_{n+1,k+1}
    big_p = QPolynomial()
    for k in range(a + 1):
        if k + 1 <= n + 1:
            term = _one_minus_z_pow(k) * QPolynomial([0] * (a - k) + [1])
            big_p = big_p + term * (g[k] * comb(a, k))
    return big_p - _one_minus_z_pow(2 * n + 1) * comb(n + q - 1, n)


@lru_cache(maxsize=None)
def t_numerator(p: SpectrumParams) -> TNumeratorData:
    n = p.n
    order = 6 * n + p.q
    prod = t_series(p, order) * _one_minus_z_pow(2 * n + 1)
    for k in range(2 * n + 1, prod.order + 1):
        if prod[k]:
            raise StructuralError(
                "T-numerator-polynomiality",
                f"(1-z)^{2 * n + 1} T_{{{n},{p.q}}} has coefficient {prod[k]} at z^{k}",
            )
    num = QPolynomial(prod[k] for k in range(2 * n + 1))
    printed = printed_t_numerator(p)
    return TNumeratorData(num, printed, printed == num)


def ode_constant(p: SpectrumParams) -> Fraction:
    return Fraction(1, factorial(p.n) * factorial(p.q - 1) * factorial(p.n - p.q))


def ode_residual(p: SpectrumParams, order: int, constant: Fraction | None = None) -> QPowerSeries:
    """d/dz(z^(n+2-q) S'(z)) - C z^n T(z) truncated at ``order``.

    ``constant`` defaults to 1/(n!(q-1)!(n-q)!); pass 1 to re-run the
    unnormalised variant.
    """
    n, q = p.n, p.q
    if order < 2 * n + 2:
        raise ValueError("order must be >= 2n + 2")
    c = ode_constant(p) if constant is None else Fraction(constant)
    s = s_series(p, order + 1)
    lhs = s.derivative().shift(n + 2 - q).derivative().truncate(order)
    rhs = t_series(p, order).shift(n).truncate(order) * c
    return lhs - rhs
