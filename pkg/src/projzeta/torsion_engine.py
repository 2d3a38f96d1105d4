"""Exact derivative layer: zetabar_q'(0) and the holomorphic analytic torsion
as linear combinations of {1, gamma_E, zeta'(-p), zeta(m), log j}.

zetabar_q is (n!)^2 times Z_q(s) = sum_j a^j g_j(s) xi_q(2s+j-1) with
g_j(s) = s h_j(s) for j >= 2, h_j(s) = (s+1)...(s+j-2)(2s-2+j)/j!.
Differentiating at s = 0:

    Z'(0) = 4 xi'(-1) + 2a (xi(0) - xi'(0))
            + sum_{j=2}^{2n} a^j [ h_j'(0) res_{j-1}/2 + h_j(0) FP xi(j-1) ]
            + sum_{j>2n} a^j h_j(0) xi(j-1).

The last sum is Omega(0) for

    Omega(s) = a G(s) eta(s) - 2 G(s-1) eta(s-1)
               - sum_{i<2n} a^i/i! [a G(s+i) xi(s+i) - 2 G(s+i-1) xi(s+i-1)]
               + 2 a^(2n)/(2n)! G(s+2n-1) xi(s+2n-1),

(G = Gamma), evaluated from exact Laurent data at s = 0; its 1/s part must
cancel identically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .exact_core import (
    QPolynomial,
    bernoulli_polynomial,
    binomial_poly,
    harmonic,
    rising_binomial_coeffs,
)
from .genfun import StructuralError, r_polynomial, zq_constant
from .special_values import gamma_residue, xi_value_neg
from .spectrum import SpectrumParams, alpha_poly, multiplicity_scale

__all__ = [
    "ExtZetaExpr",
    "LaurentBlock",
    "w_coeff",
    "h_poly",
    "h_at_zero",
    "pq_coeffs",
    "pq_coeffs_any",
    "bold_c",
    "bold_c_closed",
    "gamma_laurent",
    "xi_laurent",
    "eta_laurent",
    "xi_laurent_bold_c",
    "omega_block",
    "zetabar_prime_expr",
    "zetabar_prime_parts",
    "printed_thm37i",
    "claim39_derivatives",
    "zetabar_prime_printed",
    "printed_omega_tail",
    "aggregate_coeffs",
    "torsion_expr",
    "torsion_printed",
    "torsion_parity_check",
]


def _prime_factors(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def _clean(d: dict) -> dict:
    return {k: Fraction(v) for k, v in sorted(d.items()) if v}


@dataclass(frozen=True)
class ExtZetaExpr:
    """constant + euler_gamma*gamma_E + sum zeta_prime[p] zeta'(-p)
    + sum zeta_pos[m] zeta(m) + sum logs[j] log j.

    Log keys are reduced to primes on construction, so two expressions are
    equal as real numbers iff their coefficients agree.
    """

    constant: Fraction = Fraction(0)
    euler_gamma: Fraction = Fraction(0)
    zeta_prime: dict = field(default_factory=dict)
    zeta_pos: dict = field(default_factory=dict)
    logs: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constant", Fraction(self.constant))
        object.__setattr__(self, "euler_gamma", Fraction(self.euler_gamma))
        object.__setattr__(self, "zeta_prime", _clean(self.zeta_prime))
        if any(m < 2 for m in self.zeta_pos):
            raise ValueError("zeta_pos keys must be >= 2")
        object.__setattr__(self, "zeta_pos", _clean(self.zeta_pos))
        logs: dict[int, Fraction] = {}
        for j, c in self.logs.items():
            if j < 1:
                raise ValueError("log keys must be positive integers")
            for prime, e in _prime_factors(j).items():
                logs[prime] = logs.get(prime, Fraction(0)) + e * Fraction(c)
        object.__setattr__(self, "logs", _clean(logs))

    @classmethod
    def rational(cls, x) -> ExtZetaExpr:
        return cls(constant=Fraction(x))

    @classmethod
    def zprime(cls, p: int, c=1) -> ExtZetaExpr:
        return cls(zeta_prime={p: Fraction(c)})

    @classmethod
    def log(cls, j: int, c=1) -> ExtZetaExpr:
        return cls(logs={j: Fraction(c)})

    def __hash__(self):
        return hash(
            (self.constant, self.euler_gamma, tuple(self.zeta_prime.items()),
             tuple(self.zeta_pos.items()), tuple(self.logs.items()))
        )

    @staticmethod
    def _merge(a: dict, b: dict, sign: int = 1) -> dict:
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, Fraction(0)) + sign * v
        return out

    def __add__(self, other) -> ExtZetaExpr:
        if isinstance(other, (int, Fraction)):
            other = ExtZetaExpr.rational(other)
        if not isinstance(other, ExtZetaExpr):
            return NotImplemented
        return ExtZetaExpr(
            self.constant + other.constant,
            self.euler_gamma + other.euler_gamma,
            self._merge(self.zeta_prime, other.zeta_prime),
            self._merge(self.zeta_pos, other.zeta_pos),
            self._merge(self.logs, other.logs),
        )

    __radd__ = __add__

    def __neg__(self) -> ExtZetaExpr:
        return self * -1

    def __sub__(self, other) -> ExtZetaExpr:
        return self + (-other)

    def __rsub__(self, other) -> ExtZetaExpr:
        return (-self) + other

    def __mul__(self, other) -> ExtZetaExpr:
        if isinstance(other, ExtZetaExpr):
            if other.is_rational():
                other = other.constant
            elif self.is_rational():
                return other * self.constant
            else:
                raise StructuralError("basis-linearity", f"product of non-rational terms {self} * {other}")
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        c = Fraction(other)
        return ExtZetaExpr(
            self.constant * c,
            self.euler_gamma * c,
            {k: v * c for k, v in self.zeta_prime.items()},
            {k: v * c for k, v in self.zeta_pos.items()},
            {k: v * c for k, v in self.logs.items()},
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not (self.constant or self.euler_gamma or self.zeta_prime or self.zeta_pos or self.logs)

    def is_rational(self) -> bool:
        return not (self.euler_gamma or self.zeta_prime or self.zeta_pos or self.logs)

    def is_pure(self) -> bool:
        """No gamma_E and no zeta(m) content."""
        return not self.euler_gamma and not self.zeta_pos

    def to_json(self) -> dict:
        return {
            "constant": str(self.constant),
            "gamma": str(self.euler_gamma),
            "zeta_prime": {str(k): str(v) for k, v in self.zeta_prime.items()},
            "zeta_pos": {str(k): str(v) for k, v in self.zeta_pos.items()},
            "logs": {str(k): str(v) for k, v in self.logs.items()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> ExtZetaExpr:
        def rd(d):
            return {int(k): Fraction(v) for k, v in d.items()}

        return cls(
            Fraction(obj.get("constant", "0")),
            Fraction(obj.get("gamma", "0")),
            rd(obj.get("zeta_prime", {})),
            rd(obj.get("zeta_pos", {})),
            rd(obj.get("logs", {})),
        )

    def __str__(self) -> str:
        parts = []
        for p, c in self.zeta_prime.items():
            parts.append(f"{c}*zeta'({-p})")
        for m, c in self.zeta_pos.items():
            parts.append(f"{c}*zeta({m})")
        for j, c in self.logs.items():
            parts.append(f"{c}*log({j})")
        if self.euler_gamma:
            parts.append(f"{self.euler_gamma}*gamma_E")
        if self.constant or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts).replace("+ -", "- ")


_ZERO = ExtZetaExpr()


@dataclass(frozen=True)
class LaurentBlock:
    """f(s0 + s) = c[-1]/s + c[0] + c[1] s + O(s^2); c[1] may be None
    when it is not determined by the basis."""

    anchor: int
    coeffs: dict

    def __getitem__(self, e: int) -> ExtZetaExpr:
        if e not in (-1, 0, 1):
            raise KeyError(e)
        c = self.coeffs.get(e, _ZERO)
        if c is None:
            raise StructuralError("laurent-order", f"order s^{e} at s0={self.anchor} is not determined")
        return c

    def determined(self, e: int) -> bool:
        return self.coeffs.get(e, _ZERO) is not None

    def __add__(self, other: LaurentBlock) -> LaurentBlock:
        if self.anchor != other.anchor:
            raise ValueError("Laurent blocks at different anchors")
        out = {}
        for e in (-1, 0, 1):
            x, y = self.coeffs.get(e, _ZERO), other.coeffs.get(e, _ZERO)
            out[e] = None if x is None or y is None else x + y
        return LaurentBlock(self.anchor, out)

    def scale(self, c) -> LaurentBlock:
        return LaurentBlock(
            self.anchor, {e: (None if v is None else v * c) for e, v in self.coeffs.items()}
        )

    def __mul__(self, other: LaurentBlock) -> LaurentBlock:
        def get(blk, e):
            if e < -1:
                return _ZERO
            if e > 1:
                return None
            return blk.coeffs.get(e, _ZERO)

        def term(x, y):
            if x is not None and x.is_zero():
                return _ZERO
            if y is not None and y.is_zero():
                return _ZERO
            if x is None or y is None:
                return None
            return x * y

        if not (term(get(self, -1), get(other, -1)) or _ZERO).is_zero():
            raise StructuralError("laurent-order", "double pole in product")
        out = {}
        for e in (-1, 0, 1):
            acc = _ZERO
            for i in range(e - 2, e + 2):
                t = term(get(self, i), get(other, e - i))
                if t is None:
                    acc = None
                    break
                acc = acc + t
            out[e] = acc
        return LaurentBlock(self.anchor, out)


# -- rational weights --------------------------------------------------------


def h_poly(j: int) -> QPolynomial:
    """h_j(s) = (s+1)(s+2)...(s+j-2)(2s-2+j)/j!."""
    if j < 2:
        raise ValueError("j must be >= 2")
    p = QPolynomial([1])
    for i in range(1, j - 1):
        p = p * QPolynomial([i, 1])
    return p * QPolynomial([j - 2, 2]) * Fraction(1, factorial(j))


def w_coeff(j: int) -> Fraction:
    return h_poly(j).derivative()(0)


def h_at_zero(j: int) -> Fraction:
    return Fraction(j - 2, j * (j - 1))


def pq_coeffs_any(n: int, q: int) -> tuple[list[Fraction], list[Fraction]]:
    """Expansion coefficients of binom(l+q-1, n) binom(l-1, n) and
    binom(l+n, n) binom(l-q+n, n) in powers of l, for any integer q."""
    big_p = binomial_poly(q - 1, n) * binomial_poly(-1, n)
    big_q = binomial_poly(n, n) * binomial_poly(n - q, n)
    return [big_p[i] for i in range(2 * n + 1)], [big_q[i] for i in range(2 * n + 1)]


def pq_coeffs(p: SpectrumParams) -> tuple[list[Fraction], list[Fraction]]:
    return pq_coeffs_any(p.n, p.q)


@lru_cache(maxsize=None)
def bold_c(p: SpectrumParams) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Coefficients of alpha(l) and of alpha(l - a) in powers of l."""
    ap = alpha_poly(p)
    shifted = ap.compose_shift(-p.shift)
    m = 2 * p.n - 1
    return tuple(ap[i] for i in range(m)), tuple(shifted[i] for i in range(m))


def bold_c_closed(p: SpectrumParams, variant: str = "printed"):
    """Closed forms for bold c from the P/Q expansions.

    ``printed``: prefactor binom(n, q-1)/(n!)^2 and sign (-1)^i on Q_i.
    ``rescaled``: the printed form times (n+1-q).
    ``corrected``: rescaled, with the sign (-1)^(i-j) that division by
    (l + a) actually produces.
    """
    n, q, a = p.n, p.q, p.shift
    big_p, big_q = pq_coeffs(p)
    pref = Fraction(comb(n, q - 1), factorial(n) ** 2)
    if variant in ("rescaled", "corrected"):
        pref *= a
    elif variant != "printed":
        raise ValueError(f"unknown variant {variant!r}")
    c, ct = [], []
    for j in range(2 * n - 1):
        sc = Fraction(0)
        sct = Fraction(0)
        for i in range(j + 2, 2 * n + 1):
            sign = (-1) ** (i - j) if variant == "corrected" else (-1) ** i
            sc += sign * big_q[i] * Fraction(a) ** (i - 2 - j)
            sct += big_p[i] * Fraction(a) ** (i - 2 - j)
        c.append(pref * sc)
        ct.append(pref * sct)
    return tuple(c), tuple(ct)


# -- Laurent data ------------------------------------------------------------


def gamma_laurent(x0: int) -> LaurentBlock:
    """Gamma(x0 + s) at an integer x0."""
    if x0 >= 1:
        f = Fraction(factorial(x0 - 1))
        return LaurentBlock(
            x0, {-1: _ZERO, 0: ExtZetaExpr.rational(f),
                 1: ExtZetaExpr(constant=f * harmonic(x0 - 1), euler_gamma=-f)}
        )
    m = -x0
    r = Fraction((-1) ** m, factorial(m))
    return LaurentBlock(
        x0, {-1: ExtZetaExpr.rational(r),
             0: ExtZetaExpr(constant=r * harmonic(m), euler_gamma=-r), 1: None}
    )


def _hurwitz_laurent(u0: int, big_a: int) -> dict:
    """zeta(u0 + s, A) for a positive integer A."""
    if u0 == 1:
        return {-1: ExtZetaExpr.rational(1),
                0: ExtZetaExpr(constant=-harmonic(big_a - 1), euler_gamma=1), 1: None}
    if u0 <= 0:
        l = -u0
        val = -bernoulli_polynomial(l + 1)(Fraction(big_a)) / (l + 1)
        deriv = ExtZetaExpr(
            zeta_prime={l: 1},
            logs={j: Fraction(j) ** l for j in range(2, big_a)},
        )
        return {-1: _ZERO, 0: ExtZetaExpr.rational(val), 1: deriv}
    finite = sum((Fraction(1, j**u0) for j in range(1, big_a)), Fraction(0))
    return {-1: _ZERO, 0: ExtZetaExpr(constant=-finite, zeta_pos={u0: 1}), 1: None}


@lru_cache(maxsize=None)
def _reduction(p: SpectrumParams, eta: bool) -> tuple:
    n = p.n
    b = rising_binomial_coeffs(2 * n - 2)
    offset = 0 if eta else p.shift
    terms: dict = {}
    for k, c in r_polynomial(p).items():
        big_a = k + offset
        for i in range(2 * n - 1):
            for pp in range(i + 1):
                key = (pp, big_a)
                terms[key] = terms.get(key, Fraction(0)) + c * b[i] * (-big_a) ** (i - pp) * comb(i, pp)
    return tuple(sorted((k, v) for k, v in terms.items() if v))


def _series_laurent(p: SpectrumParams, s0: int, eta: bool) -> LaurentBlock:
    acc = LaurentBlock(s0, {-1: _ZERO, 0: _ZERO, 1: _ZERO})
    for (pp, big_a), coef in _reduction(p, eta):
        acc = acc + LaurentBlock(s0, _hurwitz_laurent(s0 - pp, big_a)).scale(coef)
    base = p.q if eta else p.n + 1
    c0 = zq_constant(p)
    power = Fraction(base) ** (-s0)
    # -C0 base^(-s0 - s) = -C0 base^-s0 (1 - s log base + ...)
    tail = LaurentBlock(
        s0, {-1: _ZERO, 0: ExtZetaExpr.rational(-c0 * power), 1: ExtZetaExpr.log(base, c0 * power)}
    )
    return acc + tail


def _check_window(p: SpectrumParams, s0: int) -> None:
    if not -3 <= s0 <= 2 * p.n:
        raise ValueError(f"anchor {s0} outside the supported window [-3, {2 * p.n}]")


@lru_cache(maxsize=None)
def xi_laurent(p: SpectrumParams, s0: int) -> LaurentBlock:
    """Laurent data of xi_q(s0 + s) through the multiple Hurwitz reduction."""
    _check_window(p, s0)
    return _series_laurent(p, s0, eta=False)


@lru_cache(maxsize=None)
def eta_laurent(p: SpectrumParams, s0: int) -> LaurentBlock:
    _check_window(p, s0)
    return _series_laurent(p, s0, eta=True)


def xi_laurent_bold_c(p: SpectrumParams, s0: int) -> LaurentBlock:
    """Same data from xi(s) = sum_p ctilde_p zeta(s - p, n + 1), an
    independent route that never touches R_{n,q}."""
    _, ct = bold_c(p)
    acc = LaurentBlock(s0, {-1: _ZERO, 0: _ZERO, 1: _ZERO})
    for pp, c in enumerate(ct):
        if c:
            acc = acc + LaurentBlock(s0, _hurwitz_laurent(s0 - pp, p.n + 1)).scale(c)
    return acc


# -- zetabar_q'(0) -----------------------------------------------------------


def omega_block(p: SpectrumParams) -> LaurentBlock:
    """Laurent data of the corrected Omega at s = 0."""
    n, a = p.n, p.shift

    def gx(x0: int, eta: bool = False) -> LaurentBlock:
        f = eta_laurent(p, x0) if eta else xi_laurent(p, x0)
        # re-anchor at the local variable s around 0
        return LaurentBlock(0, (gamma_laurent(x0) * f).coeffs)

    total = gx(0, eta=True).scale(a) + gx(-1, eta=True).scale(-2)
    for i in range(2 * n):
        w = Fraction(a**i, factorial(i))
        total = total + gx(i).scale(-w * a) + gx(i - 1).scale(2 * w)
    total = total + gx(2 * n - 1).scale(Fraction(2 * a ** (2 * n), factorial(2 * n)))
    if not total[-1].is_zero():
        raise StructuralError("omega-pole-cancellation", f"1/s coefficient {total[-1]}")
    return total


@lru_cache(maxsize=None)
def zetabar_prime_parts(p: SpectrumParams) -> dict:
    """The pieces of Z'(0) (alpha-normalised, before the (n!)^2 factor)."""
    n, a = p.n, p.shift
    xm1, x0 = xi_laurent(p, -1), xi_laurent(p, 0)
    boundary = 4 * xm1[1] + (x0[0] - x0[1]) * (2 * a)
    residue_terms = _ZERO
    finite_terms = _ZERO
    for j in range(2, 2 * n + 1):
        blk = xi_laurent(p, j - 1)
        res = blk[-1]
        if res != ExtZetaExpr.rational(gamma_residue(p, j - 1)):
            raise StructuralError("residue-consistency", f"xi residue at {j - 1}: {res}")
        residue_terms = residue_terms + res * (Fraction(a) ** j * w_coeff(j) / 2)
        finite_terms = finite_terms + blk[0] * (Fraction(a) ** j * h_at_zero(j))
    omega = omega_block(p)
    tail = omega[0]
    total = boundary + residue_terms + finite_terms + tail
    return {
        "boundary": boundary,
        "residue_terms": residue_terms,
        "finite_part_terms": finite_terms,
        "tail": tail,
        "omega_pole": omega[-1],
        "total": total,
    }


@lru_cache(maxsize=None)
def zetabar_prime_expr(p: SpectrumParams) -> ExtZetaExpr:
    """zetabar_q'(0) as an exact ExtZetaExpr."""
    total = zetabar_prime_parts(p)["total"] * multiplicity_scale(p.n)
    if not total.is_pure():
        raise StructuralError("basis-purity", f"zetabar'_{p.q}(0) for n={p.n} contains {total}")
    return total


# -- printed formulas (diagnostics) -----------------------------------------


def printed_thm37i(p: SpectrumParams) -> dict:
    """xi'(-1), xi'(0), eta'(-1), eta'(0) evaluated verbatim: sums over
    k = q..2n-1 only and no finite Hurwitz log corrections."""
    n, q = p.n, p.q
    b = rising_binomial_coeffs(2 * n - 2)
    cs = r_polynomial(p).c
    binom_ = comb(n + q - 1, n)

    def part(shift_of_k, sh: int) -> ExtZetaExpr:
        out = _ZERO
        for k in range(q, 2 * n):
            c = cs.get(k, Fraction(0))
            for i in range(2 * n - 1):
                for pp in range(i + 1):
                    coef = c * b[i] * Fraction(shift_of_k(k)) ** (i - pp) * comb(i, pp)
                    out = out + ExtZetaExpr.zprime(pp + sh, coef)
        return out

    xi_s = lambda k: q - n - 1 - k
    eta_s = lambda k: -k
    return {
        "xi'(-1)": part(xi_s, 1) + ExtZetaExpr.log(n + 1, Fraction(binom_, q)),
        "xi'(0)": part(xi_s, 0) + ExtZetaExpr.log(n + 1, Fraction(binom_, q * (n + 1))),
        "eta'(-1)": part(eta_s, 1) + ExtZetaExpr.log(q, Fraction(binom_, n + 1)),
        "eta'(0)": part(eta_s, 0) + ExtZetaExpr.log(q, Fraction(binom_, (n + 1) * q)),
    }


def claim39_derivatives(p: SpectrumParams) -> dict:
    """The bold-c form of the same four derivatives, verbatim."""
    n, q = p.n, p.q
    c, ct = bold_c(p)
    binom_ = comb(n + q - 1, n)

    def comb_sum(coeffs, sh):
        return sum((ExtZetaExpr.zprime(i + sh, v) for i, v in enumerate(coeffs)), _ZERO)

    return {
        "xi'(-1)": comb_sum(ct, 1) + ExtZetaExpr.log(n + 1, Fraction(binom_, q)),
        "xi'(0)": comb_sum(ct, 0) + ExtZetaExpr.log(n + 1, Fraction(binom_, q * (n + 1))),
        "eta'(-1)": comb_sum(c, 1) + ExtZetaExpr.log(q, Fraction(binom_, n + 1)),
        "eta'(0)": comb_sum(c, 0) + ExtZetaExpr.log(q, Fraction(binom_, (n + 1) * q)),
    }


def true_derivatives(p: SpectrumParams) -> dict:
    return {
        "xi'(-1)": xi_laurent(p, -1)[1],
        "xi'(0)": xi_laurent(p, 0)[1],
        "eta'(-1)": eta_laurent(p, -1)[1],
        "eta'(0)": eta_laurent(p, 0)[1],
    }


def _residue_sum(p: SpectrumParams) -> ExtZetaExpr:
    a = p.shift
    return ExtZetaExpr.rational(
        sum((Fraction(a) ** j * w_coeff(j) * gamma_residue(p, j - 1) for j in range(2, 2 * p.n + 1)), Fraction(0))
    )


def printed_omega_tail(p: SpectrumParams) -> ExtZetaExpr:
    """The printed value a eta'(0) - 2 eta'(-1) - a xi'(0) + 2 xi'(-1) of
    the j > 2n tail (with true derivative values)."""
    d = true_derivatives(p)
    a = p.shift
    return d["eta'(0)"] * a - 2 * d["eta'(-1)"] - d["xi'(0)"] * a + 2 * d["xi'(-1)"]


def zetabar_prime_printed(p: SpectrumParams, which: str = "thm37ii") -> ExtZetaExpr:
    """A printed formula for zetabar_q'(0), evaluated verbatim and scaled by
    (n!)^2 so that it is comparable with :func:`zetabar_prime_expr`.

    thm37ii: 6xi'(-1) - 3a xi'(0) - 2eta'(-1) + a eta'(0) + 2a xi(0)
             + sum a^j w_j gamma(j-1), with true derivative values;
    claim39: the bold-c expansion of the same;
    cor310:  the P/Q closed form.
    """
    n, q, a = p.n, p.q, p.shift
    xi0 = ExtZetaExpr.rational(xi_value_neg(p, 0))
    common = xi0 * (2 * a) + _residue_sum(p)
    c0 = zq_constant(p)
    logs = ExtZetaExpr.log(n + 1, 3 * (n + 1 + q) * c0) + ExtZetaExpr.log(q, (n + 1 - 3 * q) * c0)
    if which == "thm37ii":
        d = true_derivatives(p)
        out = 6 * d["xi'(-1)"] - d["xi'(0)"] * (3 * a) - 2 * d["eta'(-1)"] + d["eta'(0)"] * a + common
    elif which == "claim39":
        c, ct = bold_c(p)
        out = ExtZetaExpr.zprime(2 * n - 1, 6 * ct[-1] - 2 * c[-1])
        out = out + ExtZetaExpr.zprime(0, a * (-3 * ct[0] + c[0]))
        for pp in range(1, 2 * n - 1):
            coef = 6 * ct[pp - 1] - 3 * a * ct[pp] - 2 * c[pp - 1] + a * c[pp]
            out = out + ExtZetaExpr.zprime(pp, coef)
        out = out + logs + common
    elif which == "cor310":
        c, ct = bold_c(p)
        big_p, big_q = pq_coeffs(p)
        pref = Fraction(comb(n, q - 1), factorial(n) ** 2)
        out = ExtZetaExpr.zprime(2 * n - 1, 4 * Fraction(comb(n, q - 1), factorial(n) ** 4))
        out = out + ExtZetaExpr.zprime(0, pref / a * (-3 * big_p[1] - big_q[1]))
        for pp in range(1, 2 * n - 1):
            coef = 5 * ct[pp - 1] - c[pp - 1] + 3 * pref * big_p[pp + 1] + (-1) ** pp * pref * big_q[pp + 1]
            out = out + ExtZetaExpr.zprime(pp, coef)
        out = out + logs + common
    else:
        raise ValueError(f"unknown printed formula {which!r}")
    return out * multiplicity_scale(n)


# -- torsion -----------------------------------------------------------------


@dataclass(frozen=True)
class Aggregates:
    c: tuple
    c_tilde: tuple
    d: tuple
    e0: ExtZetaExpr


def aggregate_coeffs(n: int) -> Aggregates:
    m = 2 * n - 1
    c_agg = [Fraction(0)] * m
    ct_agg = [Fraction(0)] * m
    d = [Fraction(0)] * (n + 1)
    e0 = _ZERO
    for q in range(1, n + 1):
        p = SpectrumParams(n, q)
        a = p.shift
        c, ct = bold_c(p)
        for i in range(m):
            c_agg[i] += (-1) ** (q + 1) * c[i]
            ct_agg[i] += (-1) ** (q + 1) * ct[i]
        big_p, big_q = pq_coeffs(p)
        pref = Fraction(comb(n, q - 1), factorial(n) ** 2)
        for pp in range(n + 1):
            nxt = pp + 1
            val = 3 * big_p[nxt] + (-1) ** pp * big_q[nxt] if nxt <= 2 * n else 0
            d[pp] += (-1) ** q * pref * val
        c0 = zq_constant(p)
        e0 = e0 + ExtZetaExpr.rational(2 * (-1) ** q * a * xi_value_neg(p, 0))
        e0 = e0 + _residue_sum(p) * (-1) ** q
        e0 = e0 + ExtZetaExpr.log(n + 1, 3 * (-1) ** q * (n + 1 + q) * c0)
        e0 = e0 + ExtZetaExpr.log(q, (-1) ** q * (n + 1 - 3 * q) * c0)
    return Aggregates(tuple(c_agg), tuple(ct_agg), tuple(d), e0)


@lru_cache(maxsize=None)
def torsion_expr(n: int) -> ExtZetaExpr:
    """sum_{q>=0} (-1)^(q+1) q zeta_q'(0) = sum_{q=1}^n (-1)^(q+1) zetabar_q'(0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = _ZERO
    for q in range(1, n + 1):
        out = out + zetabar_prime_expr(SpectrumParams(n, q)) * (-1) ** (q + 1)
    if not out.is_pure():
        raise StructuralError("basis-purity", f"torsion for n={n} contains {out}")
    return out


def torsion_printed(n: int) -> ExtZetaExpr:
    """The printed aggregate formula, verbatim, scaled by (n!)^2."""
    ag = aggregate_coeffs(n)
    out = -ExtZetaExpr.zprime(0, ag.d[0]) + ag.e0
    for pp in range(1, n + 1):
        out = out + ExtZetaExpr.zprime(pp, 5 * ag.c_tilde[pp - 1] - ag.c[pp - 1] + ag.d[pp])
    return out * multiplicity_scale(n)


def torsion_parity_check(n: int) -> dict:
    """Compare the torsion with the structural expectation that only
    zeta'(-m) with m odd, 1 <= m <= n, occur (besides rationals and logs).
    Returns the offending coefficients (empty when the expectation holds)."""
    t = torsion_expr(n)
    offending = {pp: c for pp, c in t.zeta_prime.items() if pp % 2 == 0 or pp > n}
    return {"expression": t, "offending": offending, "holds": not offending}
