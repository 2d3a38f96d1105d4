"""Exact rational arithmetic: Bernoulli machinery, dense polynomials and
truncated power series over Q.

``fractions.Fraction`` is the ambient scalar; it is always normalised
(lowest terms, positive denominator), which is all the invariants need.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

__all__ = [
    "Rational",
    "QPolynomial",
    "QPowerSeries",
    "BCoefficients",
    "bernoulli_number",
    "bernoulli_polynomial",
    "rising_binomial_coeffs",
    "binomial_poly",
    "partial_fraction_g",
    "interpolate_poly",
    "harmonic",
    "rational_to_json",
    "rational_from_json",
]

Rational = Fraction


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def rational_to_json(x: Fraction) -> dict:
    x = _q(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(obj) -> Fraction:
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    return Fraction(obj)


class QPolynomial:
    """Dense univariate polynomial with Fraction coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``; trailing zeros are
    stripped so the zero polynomial has an empty coefficient list and
    ``degree == -inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_q(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def x(cls) -> QPolynomial:
        return cls([0, 1])

    @classmethod
    def constant(cls, a) -> QPolynomial:
        return cls([a])

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QPolynomial([other])
        if not isinstance(other, QPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> QPolynomial:
        other = _as_poly(other)
        m = max(len(self.coeffs), len(other.coeffs))
        return QPolynomial(self[i] + other[i] for i in range(m))

    __radd__ = __add__

    def __neg__(self) -> QPolynomial:
        return QPolynomial(-a for a in self.coeffs)

    def __sub__(self, other) -> QPolynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> QPolynomial:
        return _as_poly(other) - self

    def __mul__(self, other) -> QPolynomial:
        if isinstance(other, (int, Fraction)):
            return QPolynomial(a * other for a in self.coeffs)
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return QPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QPolynomial:
        out = QPolynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def compose_shift(self, h) -> QPolynomial:
        """Return p(x + h)."""
        out = QPolynomial()
        shift = QPolynomial([h, 1])
        for a in reversed(self.coeffs):
            out = out * shift + a
        return out

    def derivative(self) -> QPolynomial:
        return QPolynomial(i * a for i, a in enumerate(self.coeffs) if i)

    def divmod_linear(self, root) -> tuple[QPolynomial, Fraction]:
        """Synthetic division by (x - root)."""
        root = _q(root)
        if not self.coeffs:
            return QPolynomial(), Fraction(0)
        out = []
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * root + a
            out.append(acc)
        rem = out.pop()
        return QPolynomial(reversed(out)), rem

    def to_json(self) -> list:
        return [rational_to_json(a) for a in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> QPolynomial:
        return cls(rational_from_json(a) for a in data)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "QPolynomial(0)"
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                terms.append(f"{a}" if i == 0 else f"{a}*x^{i}")
        return "QPolynomial(" + " + ".join(terms) + ")"


def _as_poly(p) -> QPolynomial:
    if isinstance(p, QPolynomial):
        return p
    return QPolynomial([p])


class QPowerSeries:
    """Truncated power series; coefficients ``0..order`` are valid."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable, order: int):
        c = [_q(a) for a in coeffs][: order + 1]
        c += [Fraction(0)] * (order + 1 - len(c))
        self.coeffs: tuple[Fraction, ...] = tuple(c)
        self.order = order

    @classmethod
    def from_poly(cls, p: QPolynomial, order: int) -> QPowerSeries:
        return cls(p.coeffs, order)

    def __getitem__(self, i: int) -> Fraction:
        if i < 0:
            return Fraction(0)
        if i > self.order:
            raise IndexError(f"coefficient {i} beyond truncation order {self.order}")
        return self.coeffs[i]

    def __add__(self, other) -> QPowerSeries:
        if isinstance(other, QPolynomial):
            other = QPowerSeries.from_poly(other, self.order)
        n = min(self.order, other.order)
        return QPowerSeries((self[i] + other[i] for i in range(n + 1)), n)

    def __neg__(self) -> QPowerSeries:
        return QPowerSeries((-a for a in self.coeffs), self.order)

    def __sub__(self, other) -> QPowerSeries:
        return self + (-other)

    def __mul__(self, other) -> QPowerSeries:
        if isinstance(other, (int, Fraction)):
            return QPowerSeries((a * other for a in self.coeffs), self.order)
        if isinstance(other, QPolynomial):
            # exact polynomial factor: order unchanged
            other = QPowerSeries.from_poly(other, self.order)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            a = self.coeffs[i]
            if a:
                for j in range(n + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return QPowerSeries(out, n)

    __rmul__ = __mul__

    def shift(self, k: int) -> QPowerSeries:
        """Multiply by z**k (k >= 0); the truncation order grows by k."""
        return QPowerSeries([0] * k + list(self.coeffs), self.order + k)

    def derivative(self) -> QPowerSeries:
        return QPowerSeries(
            (i * a for i, a in enumerate(self.coeffs) if i), self.order - 1
        )

    def valuation(self) -> float:
        for i, a in enumerate(self.coeffs):
            if a:
                return i
        return float("inf")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, order: int) -> QPowerSeries:
        return QPowerSeries(self.coeffs, min(order, self.order))

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [rational_to_json(a) for a in self.coeffs]}

    def __eq__(self, other) -> bool:
        if not isinstance(other, QPowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        body = ", ".join(str(a) for a in self.coeffs[:8])
        tail = ", ..." if self.order >= 8 else ""
        return f"QPowerSeries([{body}{tail}] + O(z^{self.order + 1}))"


# -- Bernoulli ---------------------------------------------------------------

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def bernoulli_number(k: int) -> Fraction:
    """B_k with B_1 = -1/2, from the recurrence sum_{j<=m} C(m+1, j) B_j = 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k < len(_bern):
        return _bern[k]
    with _bern_lock:
        while len(_bern) <= k:
            m = len(_bern)
            s = sum(comb(m + 1, j) * _bern[j] for j in range(m))
            _bern.append(-s / (m + 1))
        return _bern[k]


def bernoulli_polynomial(l: int) -> QPolynomial:
    """B_l(x) = sum_j C(l, j) B_j x^(l-j)."""
    return QPolynomial(comb(l, i) * bernoulli_number(l - i) for i in range(l + 1))


class BCoefficients:
    """Coefficients b_i of binom(z+d, d) = sum_i b_i z^i."""

    __slots__ = ("d", "b")

    def __init__(self, d: int, b: Sequence[Fraction]):
        self.d = d
        self.b = tuple(b)

    def poly(self) -> QPolynomial:
        return QPolynomial(self.b)

    def __getitem__(self, i: int) -> Fraction:
        return self.b[i]

    def __len__(self) -> int:
        return len(self.b)

    def __repr__(self) -> str:
        return f"BCoefficients(d={self.d}, b={[str(x) for x in self.b]})"


def binomial_poly(shift: int, d: int) -> QPolynomial:
    """binom(x + shift, d) as a polynomial in x (d >= 0)."""
    p = QPolynomial([1])
    for i in range(d):
        p = p * QPolynomial([shift - i, 1])
    return p * Fraction(1, factorial(d))


def rising_binomial_coeffs(d: int) -> BCoefficients:
    if d < 0:
        raise ValueError("d must be >= 0")
    p = binomial_poly(d, d)
    return BCoefficients(d, [p[i] for i in range(d + 1)])


def partial_fraction_g(n: int) -> list[Fraction]:
    """Coefficients a_{n+1,k}, k = 1..n+1, of G_{n+1}(z) = sum a_k z^k with
    1/(x(1-x))^(n+1) = G(1/x) + G(1/(1-x)).

    G(1/(1-x)) is regular at x = 0, so G(1/x) is the principal part of the
    Laurent expansion at 0: x^-(n+1) * sum_m C(m+n, n) x^m.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    # coefficient of x^-k comes from m = n+1-k
    return [Fraction(comb(2 * n + 1 - k, n)) for k in range(1, n + 2)]


def interpolate_poly(samples: Sequence[tuple]) -> QPolynomial:
    """Exact Lagrange interpolation through ``samples`` of (x, y) pairs."""
    xs = [_q(x) for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate abscissa in interpolation samples")
    out = QPolynomial()
    for i, (xi, (_, yi)) in enumerate(zip(xs, samples)):
        basis = QPolynomial([1])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * QPolynomial([-xj, 1])
                denom *= xi - xj
        out = out + basis * (_q(yi) / denom)
    return out


def harmonic(m: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, m + 1)), Fraction(0))
