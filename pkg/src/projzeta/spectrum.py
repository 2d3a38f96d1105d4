"""Spectrum of the Dolbeault Laplacian on (0,q)-forms of P^n(C) with the
Fubini-Study metric, split into the "half" zeta functions zetabar_q.

zetabar_q(s) = sum_{k>=q} d_{n,q}(k) / (k(k+n+1-q))^s, and
zeta_q = zetabar_q + zetabar_{q+1} for q < n, zeta_n = zetabar_n.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exact_core import QPolynomial, binomial_poly

__all__ = [
    "SpectrumParams",
    "SpectralTerm",
    "multiplicity",
    "multiplicity_scale",
    "alpha",
    "alpha_poly",
    "eigenvalue",
    "zeta_components",
    "spectral_terms",
    "telescoped_coefficients",
]

EIGENVALUE_LIMIT = 2**62


@dataclass(frozen=True, order=True)
class SpectrumParams:
    n: int
    q: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension n must be >= 1, got {self.n}")
        if not 1 <= self.q <= self.n:
            raise ValueError(f"need 1 <= q <= n, got q={self.q}, n={self.n}")

    @property
    def shift(self) -> int:
        """a = n + 1 - q, the offset in the eigenvalue k(k + a)."""
        return self.n + 1 - self.q


@dataclass(frozen=True)
class SpectralTerm:
    k: int
    eigenvalue: int
    multiplicity: int


def _check_k(p: SpectrumParams, k: int) -> None:
    if k < p.q:
        raise ValueError(f"k={k} below the spectrum start q={p.q}")


def eigenvalue(p: SpectrumParams, k: int) -> int:
    _check_k(p, k)
    lam = k * (k + p.shift)
    if lam > EIGENVALUE_LIMIT:
        raise OverflowError(f"eigenvalue for k={k} exceeds {EIGENVALUE_LIMIT}")
    return lam


def multiplicity(p: SpectrumParams, k: int) -> int:
    """d_{n,q}(k), evaluated with exact integer factorials."""
    _check_k(p, k)
    n, q, a = p.n, p.q, p.shift
    num = (2 * k + a) * factorial(k + n) * factorial(k + n - q)
    den = k * (k + a) * factorial(k) * factorial(k - q) * factorial(n) * factorial(n - q) * factorial(q - 1)
    d = Fraction(num, den)
    if d.denominator != 1 or d <= 0:
        raise ArithmeticError(f"multiplicity d_{{{n},{q}}}({k}) = {d} is not a positive integer")
    return d.numerator


def alpha(p: SpectrumParams, k: int) -> Fraction:
    _check_k(p, k)
    n, q, a = p.n, p.q, p.shift
    num = comb(k + n, k) * comb(k - q + n, k - q)
    return Fraction(num, factorial(n) * factorial(q - 1) * factorial(n - q) * k * (k + a))


def multiplicity_scale(n: int) -> int:
    """(n!)^2, the exact ratio d_{n,q}(k) / ((2k + n + 1 - q) alpha_{n,q}(k)).

    The ratio is independent of q and k, so every series built on alpha
    gives zetabar_q / (n!)^2.
    """
    return factorial(n) ** 2


@lru_cache(maxsize=None)
def alpha_poly(p: SpectrumParams) -> QPolynomial:
    """alpha_{n,q} as a polynomial in k of degree 2n - 2.

    The numerator binom(k+n, n) binom(k-q+n, n) vanishes at k = 0 and at
    k = -(n+1-q), so the division by k(k+a) is exact.
    """
    n, q, a = p.n, p.q, p.shift
    num = binomial_poly(n, n) * binomial_poly(n - q, n)
    quot, rem = num.divmod_linear(0)
    if rem:
        raise ArithmeticError("k does not divide the alpha numerator")
    quot, rem = quot.divmod_linear(-a)
    if rem:
        raise ArithmeticError("k + n + 1 - q does not divide the alpha numerator")
    return quot * Fraction(1, factorial(n) * factorial(q - 1) * factorial(n - q))


def zeta_components(p: SpectrumParams) -> list[int]:
    return [p.q, p.q + 1] if p.q < p.n else [p.n]


def spectral_terms(p: SpectrumParams, k_max: int, start: int | None = None) -> list[SpectralTerm]:
    """SpectralTerm rows for start <= k <= k_max (start defaults to q)."""
    start = p.q if start is None else start
    _check_k(p, start)
    return [SpectralTerm(k, eigenvalue(p, k), multiplicity(p, k)) for k in range(start, k_max + 1)]


def telescoped_coefficients(n: int, max_eigenvalue: int) -> tuple[dict, dict]:
    """Dirichlet coefficients (eigenvalue -> weight) of
    sum_q (-1)^(q+1) q zeta_q and of sum_q (-1)^(q+1) zetabar_q, truncated
    at ``max_eigenvalue``.  The two dictionaries are equal by telescoping.
    """
    def bar(q: int) -> dict:
        out: dict[int, int] = defaultdict(int)
        p = SpectrumParams(n, q)
        k = q
        while k * (k + p.shift) <= max_eigenvalue:
            out[k * (k + p.shift)] += multiplicity(p, k)
            k += 1
        return out

    bars = {q: bar(q) for q in range(1, n + 1)}
    full: dict[int, int] = defaultdict(int)
    half: dict[int, int] = defaultdict(int)
    for q in range(1, n + 1):
        for comp in zeta_components(SpectrumParams(n, q)):
            for lam, d in bars[comp].items():
                full[lam] += (-1) ** (q + 1) * q * d
        for lam, d in bars[q].items():
            half[lam] += (-1) ** (q + 1) * d
    strip = lambda dct: {k: v for k, v in sorted(dct.items()) if v}
    return strip(full), strip(half)
