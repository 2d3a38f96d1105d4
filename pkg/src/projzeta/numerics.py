"""Arbitrary-precision numerics and the independent continuation oracles.

Every routine takes a :class:`NumericContext`, which owns a private mpmath
context, so nothing here touches ``mpmath.mp`` and contexts can be used
from separate threads.  Results are returned as :class:`Estimate`
(value, conservative absolute error).

Two continuation routes are provided:

* the binomial-splitting series for zetabar_q evaluated with Hurwitz zeta
  values (:func:`claim_n1_eval`, :func:`continue_at`,
  :func:`derivative_at_zero`);
* the small-t expansion of the heat trace, which uses only the spectrum
  (:func:`theta_coefficient`).
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple

import mpmath

from .exact_core import QPolynomial, rising_binomial_coeffs
from .genfun import r_polynomial, zq_constant
from .spectrum import SpectrumParams, alpha_poly, multiplicity, multiplicity_scale

__all__ = [
    "NumericContext",
    "Estimate",
    "PoleProximityError",
    "ConvergenceError",
    "hurwitz_zeta",
    "hurwitz_zeta_deriv",
    "riemann_zeta_prime_neg",
    "xi_numeric",
    "zetabar_direct",
    "claim_n1_eval",
    "continue_at",
    "derivative_at_zero",
    "numeric_residue",
    "theta_coefficient",
    "eval_expr",
]


class PoleProximityError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


class Estimate(NamedTuple):
    value: object
    error: object

    def __float__(self) -> float:
        return float(mpmath.re(self.value))


@dataclass
class NumericContext:
    """Working precision (decimal digits) and the truncation target."""

    precision: int = 60
    target_error: float | None = None
    guard: int = 20
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False)
    _bern: list = field(init=False, repr=False, default_factory=list)

    def __post_init__(self):
        if self.precision < 30:
            raise ValueError("precision must be >= 30 digits")
        if self.target_error is None:
            self.target_error = 10.0 ** (-self.precision)
        self.mp = mpmath.MPContext()
        self.mp.dps = self.precision + self.guard

    @property
    def eps(self):
        """Relative rounding level of the working context."""
        return self.mp.mpf(10) ** (-(self.precision + self.guard - 2))

    def tol(self):
        return self.mp.mpf(self.target_error)


# -- Hurwitz zeta by Euler-Maclaurin ----------------------------------------


def _em(s, a, ctx: NumericContext, want_deriv: bool):
    mp = ctx.mp
    s = mp.mpmathify(s)
    a = mp.mpf(a)
    if a <= 0:
        raise ValueError("Hurwitz parameter a must be positive")
    if abs(s - 1) < mp.mpf(10) ** (-(ctx.precision // 2)):
        raise PoleProximityError(f"s = {s} is too close to the pole at 1")
    n_start = int(0.5 * (ctx.precision + ctx.guard)) + 5
    if mp.re(s) < 0 or abs(mp.im(s)) > 0:
        n_start += int(abs(s)) + 1
    for n_shift in (n_start, 2 * n_start, 4 * n_start, 8 * n_start, 16 * n_start):
        out = _em_attempt(s, a, n_shift, ctx, want_deriv)
        if out is not None:
            return out
    raise ConvergenceError(f"Euler-Maclaurin failed to converge for s={s}, a={a}")


def _em_attempt(s, a, n_shift, ctx: NumericContext, want_deriv: bool):
    mp = ctx.mp
    x = a + n_shift
    logx = mp.log(x)
    val = mp.zero
    der = mp.zero
    mag = mp.zero  # sum of |terms|, the scale of the rounding error
    for k in range(n_shift):
        t = mp.power(a + k, -s)
        val += t
        mag += abs(t)
        if want_deriv:
            der -= mp.log(a + k) * t
    xs = mp.power(x, -s)
    integral = x * xs / (s - 1)
    val += integral + xs / 2
    mag = (mag + abs(integral) + abs(xs)) * (1 + logx)
    if want_deriv:
        der += -logx * integral - integral / (s - 1) - logx * xs / 2
    # correction terms B_{2j}/(2j)! (s)_{2j-1} x^(-s-2j+1)
    poch, dpoch = mp.one, mp.zero  # (s)_m and its s-derivative, m = 0
    m = 0
    xpow = xs * x  # x^(-s-2j+1) at j = 0
    prev = None
    scale = abs(val) + abs(der)
    thresh = ctx.eps * (scale if scale else mp.one)
    j_max = 4 * ctx.precision + 40
    for j in range(1, j_max):
        while m < 2 * j - 1:
            poch, dpoch = poch * (s + m), dpoch * (s + m) + poch
            m += 1
        xpow /= x * x
        coeff = _em_coeff(ctx, j)
        t = coeff * poch * xpow
        dt = coeff * (dpoch - poch * logx) * xpow if want_deriv else mp.zero
        size = abs(t) + abs(dt)
        if poch == 0 and dpoch == 0:
            # s is a non-positive integer: the series terminated exactly
            return val, der, 4 * ctx.eps * (scale + mag), 4 * ctx.eps * (scale + mag)
        if size <= thresh:
            err_v = 4 * abs(t) + 4 * ctx.eps * (n_shift * abs(val) + mag)
            err_d = 4 * abs(dt) + 4 * ctx.eps * (n_shift * (abs(der) + abs(val)) + mag)
            return val, der, err_v, err_d
        if prev is not None and j > 3 and size > prev:
            return None
        prev = size
        val += t
        der += dt
    return None


def _em_coeff(ctx: NumericContext, j: int):
    cache = ctx._bern
    while len(cache) <= j:
        i = len(cache)
        cache.append(ctx.mp.bernoulli(2 * i) / ctx.mp.factorial(2 * i))
    return cache[j]


def hurwitz_zeta(s, a, ctx: NumericContext) -> Estimate:
    val, _, err, _ = _em(s, a, ctx, False)
    return Estimate(val, err)


def hurwitz_zeta_deriv(s, a, ctx: NumericContext) -> Estimate:
    """d/ds zeta(s, a)."""
    _, der, _, err = _em(s, a, ctx, True)
    return Estimate(der, err)


def riemann_zeta_prime_neg(p: int, ctx: NumericContext) -> Estimate:
    """zeta'(-p) for p >= 0."""
    if p < 0:
        raise ValueError("p must be >= 0")
    return hurwitz_zeta_deriv(-p, 1, ctx)


# -- xi_q -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _xi_hurwitz_terms(p: SpectrumParams, eta: bool = False) -> tuple:
    """Exact coefficients {(shift p', A): coeff} with
    xi_q(s) = sum coeff * zeta(s - p', A) - C0 (n+1)^-s (A = k + a),
    or the same for eta_q (A = k, constant term C0 q^-s)."""
    n = p.n
    b = rising_binomial_coeffs(2 * n - 2)
    coef: dict = defaultdict(Fraction)
    offset = 0 if eta else p.shift
    for k, c in r_polynomial(p).items():
        big_a = k + offset
        for i in range(2 * n - 1):
            for pp in range(i + 1):
                coef[(pp, big_a)] += c * b[i] * (-big_a) ** (i - pp) * comb(i, pp)
    return tuple(sorted((key, v) for key, v in coef.items() if v))


def _direct_terms_needed(p: SpectrumParams, x, ctx: NumericContext):
    """Smallest L with the Dirichlet tail of xi below the target, or None."""
    n = p.n
    xr = float(ctx.mp.re(x))
    if xr < 2 * n + 6:
        return None
    amax = float(sum(abs(c) for c in alpha_poly(p).coeffs))
    # log of the relative target: eps * alpha(q) (n+1)^-x
    log_target = (
        math.log(float(ctx.eps)) + math.log(float(alpha_poly(p)(p.q))) - xr * math.log(n + 1)
    )
    expo = xr - 2 * n + 1
    # tail <= amax * L^(2n-1-x) / (x-2n+1)
    for big_l in (8, 16, 32, 64, 128, 256):
        if math.log(amax) - expo * math.log(big_l) - math.log(expo) < log_target:
            return big_l
    return None


def xi_numeric(p: SpectrumParams, x, ctx: NumericContext, eta: bool = False) -> Estimate:
    """xi_q(x) (or eta_q(x)) at a real or complex point away from the poles."""
    mp = ctx.mp
    x = mp.mpmathify(x)
    offset = 0 if eta else p.shift
    big_l = _direct_terms_needed(p, x, ctx)
    if big_l is not None:
        poly = alpha_poly(p)
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in poly.coeffs]
        total = mp.zero
        for l in range(p.q, big_l + 1):
            al = mp.polyval(coeffs[::-1], l)
            total += al * mp.power(l + offset, -x)
        amax = sum(abs(c) for c in poly.coeffs)
        expo = mp.re(x) - 2 * p.n + 1
        tail = mp.mpf(amax.numerator) / amax.denominator * mp.power(big_l, -expo) / expo
        return Estimate(total, tail + ctx.eps * abs(total) * big_l)
    # zeta(s, A) for consecutive A from one Euler-Maclaurin value:
    # zeta(s, A + 1) = zeta(s, A) - A^-s
    by_shift: dict = defaultdict(list)
    for (shift, big_a), c in _xi_hurwitz_terms(p, eta):
        by_shift[shift].append((big_a, c))
    total = mp.zero
    err = mp.zero
    for shift, items in by_shift.items():
        arg = x - shift
        a0 = items[0][0]
        z = hurwitz_zeta(arg, a0, ctx)
        cur, cur_a = z.value, a0
        for big_a, c in items:
            while cur_a < big_a:
                cur -= mp.power(cur_a, -arg)
                cur_a += 1
            cf = mp.mpf(c.numerator) / c.denominator
            total += cf * cur
            err += abs(cf) * (z.error + ctx.eps * (abs(cur) + abs(z.value)) * (big_a - a0 + 1))
    c0 = zq_constant(p)
    base = p.q if eta else p.n + 1
    total -= mp.mpf(c0.numerator) / c0.denominator * mp.power(base, -x)
    return Estimate(total, err)


def numeric_residue(p: SpectrumParams, l: int, ctx: NumericContext, delta=None) -> Estimate:
    """Residue of xi_q at l from symmetric offsets: (xi(l+d) - xi(l-d)) d / 2."""
    mp = ctx.mp
    d = mp.mpf(10) ** (-(ctx.precision // 3)) if delta is None else mp.mpf(delta)
    plus = xi_numeric(p, l + d, ctx)
    minus = xi_numeric(p, l - d, ctx)
    val = (plus.value - minus.value) * d / 2
    # the symmetric combination cancels the finite part; O(d^2) remains
    return Estimate(val, (plus.error + minus.error) * d + d * d * (1 + abs(val)))


# -- direct Dirichlet summation ---------------------------------------------


def zetabar_direct(p: SpectrumParams, s, ctx: NumericContext, terms: int = 40, start: int | None = None) -> Estimate:
    """zetabar_q(s) for Re s > n: partial sum to ``terms`` plus the tail.

    Beyond the partial sum, d(k) (k(k+a))^-s is expanded in powers of 1/k:
    d is a polynomial of degree 2n-1, and
    (k(k+a))^-s = k^-2s sum_i binom(-s, i) (a/k)^i,
    so the tail is a convergent combination of Hurwitz zeta values at
    k = terms + 1 with geometric ratio a/(terms+1).
    """
    mp = ctx.mp
    s = mp.mpmathify(s)
    n, a = p.n, p.shift
    if mp.re(s) <= n:
        raise ValueError(f"direct summation needs Re s > n = {n}")
    start = p.q if start is None else start
    if terms < start or terms <= 2 * a:
        raise ValueError("need more direct terms")
    partial = mp.zero
    for k in range(start, terms + 1):
        partial += multiplicity(p, k) * mp.power(k * (k + a), -s)
    # d(k) = scale * (2k + a) alpha(k) as a polynomial in k
    dpoly = alpha_poly(p) * QPolynomial([a, 2]) * multiplicity_scale(n)
    dco = [mp.mpf(c.numerator) / c.denominator for c in dpoly.coeffs]
    k0 = terms + 1
    ratio = mp.mpf(a) / k0
    tail = mp.zero
    err = mp.zero
    i = 0
    binom_ = mp.one  # binom(-s, i)
    while True:
        term_i = mp.zero
        for e, c in enumerate(dco):
            if c:
                z = hurwitz_zeta(2 * s + i - e, k0, ctx)
                term_i += c * z.value
                err += abs(c * binom_ * a**i) * z.error
        contrib = binom_ * mp.mpf(a) ** i * term_i
        tail += contrib
        i += 1
        binom_ = binom_ * (-s - i + 1) / i
        if i > 4 and abs(contrib) < ctx.eps * abs(partial):
            break
        if i > 20 * ctx.precision:
            raise ConvergenceError("tail expansion did not converge")
    # geometric bound on the remaining terms
    err += 4 * abs(contrib) * (1 / (1 - ratio)) + ctx.eps * abs(partial) * terms
    return Estimate(partial + tail, err)


# -- binomial-splitting series ----------------------------------------------


def _g_weight(s, j: int, mp):
    """Gamma(s+j-1)(2s-2+j) / (j! Gamma(s)) as an exact polynomial in s."""
    if j == 0:
        return mp.mpf(2)
    return mp.rf(s, j - 1) * (2 * s - 2 + j) / mp.factorial(j)


def claim_n1_eval(p: SpectrumParams, s, ctx: NumericContext) -> Estimate:
    """zetabar_q(s) from sum_j a^j g_j(s) xi_q(2s+j-1), times (n!)^2."""
    mp = ctx.mp
    s = mp.mpmathify(s)
    n, a = p.n, p.shift
    for j in range(0, 2 * n + 1):
        x = 2 * s + j - 1
        if abs(mp.im(x)) == 0 and any(abs(x - l) < mp.mpf(10) ** (-(ctx.precision // 2)) for l in range(1, 2 * n)):
            if abs(_g_weight(s, j, mp)) > mp.mpf(10) ** (-(ctx.precision // 2)):
                raise PoleProximityError(f"xi pole at 2s+{j}-1 = {x}")
    total = mp.zero
    err = mp.zero
    ratio = mp.mpf(a) / (n + 1)
    j = 0
    small = 0
    while True:
        g = _g_weight(s, j, mp)
        if g != 0:
            xi = xi_numeric(p, 2 * s + j - 1, ctx)
            term = mp.mpf(a) ** j * g * xi.value
            total += term
            err += abs(mp.mpf(a) ** j * g) * xi.error
        else:
            term = mp.zero
        if j > 2 * n + 2 and abs(term) <= ctx.tol() * (abs(total) + ctx.eps) / 100:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        j += 1
        if j > 40 * ctx.precision + 200:
            raise ConvergenceError("binomial-splitting series did not converge")
    # remaining terms decay at least like ratio^j times a slowly varying factor
    err += 8 * abs(term) / (1 - ratio) + ctx.eps * abs(total) * j
    scale = multiplicity_scale(n)
    return Estimate(total * scale, err * scale)


def _richardson_sym(f, s0, ctx: NumericContext, base, levels: int):
    """Extrapolate symmetric averages (f(s0+d)+f(s0-d))/2 at d = base*2^-t to d -> 0."""
    mp = ctx.mp
    rows = []
    errs = mp.zero
    for t in range(levels + 1):
        d = base / mp.mpf(2) ** t
        hi, lo = f(s0 + d), f(s0 - d)
        rows.append((hi.value + lo.value) / 2)
        errs = max(errs, (hi.error + lo.error) / 2)
    table = [rows]
    for lev in range(1, levels + 1):
        prev = table[-1]
        fac = mp.mpf(4) ** lev
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
    best = table[-1][0]
    if levels >= 1:
        diff = abs(table[-1][0] - table[-2][-1])
    else:
        diff = abs(rows[0])
    return best, diff + 4 * errs


def continue_at(p: SpectrumParams, s0: int, ctx: NumericContext) -> Estimate:
    """zetabar_q(s0) at a non-positive integer, by offset evaluation of the
    binomial-splitting series and Richardson extrapolation in delta^2."""
    if s0 > 0:
        raise ValueError("continue_at is for non-positive integers")
    mp = ctx.mp
    # powers of two keep every 2s + j - 1 exactly representable near the poles
    base = mp.ldexp(1, -27)
    digits = -math.log10(float(ctx.target_error))
    levels = max(1, math.ceil((digits / 8 - 2) / 2) + 1)
    val, err = _richardson_sym(lambda s: claim_n1_eval(p, s, ctx), mp.mpf(s0), ctx, base, levels)
    if not mp.isfinite(val):
        raise ConvergenceError("extrapolation produced a non-finite value")
    return Estimate(val, err)


def derivative_at_zero(p: SpectrumParams, ctx: NumericContext) -> Estimate:
    """zetabar_q'(0) by central differences with one Richardson level."""
    mp = ctx.mp
    # a power of two near 10^-(precision/3), so s = +-h and 2s + j - 1 are exact
    h = mp.ldexp(1, -int((ctx.precision // 3) * math.log2(10)))

    def central(step):
        hi = claim_n1_eval(p, step, ctx)
        lo = claim_n1_eval(p, -step, ctx)
        return (hi.value - lo.value) / (2 * step), (hi.error + lo.error) / (2 * step)

    d1, e1 = central(h)
    d2, e2 = central(h / 2)
    val = (4 * d2 - d1) / 3
    err = abs(d2 - d1) / 3 + 2 * (e1 + e2)
    return Estimate(val, err)


# -- heat trace --------------------------------------------------------------


def _theta(p: SpectrumParams, t, ctx: NumericContext, start: int):
    """t^n * sum_k d(k) exp(-lambda_k t), summed until negligible."""
    mp = ctx.mp
    total = mp.zero
    k = start
    while True:
        lam = k * (k + p.shift)
        term = multiplicity(p, k) * mp.exp(-lam * t)
        total += term
        if lam * t > 20 and term < ctx.eps * total * mp.mpf(10) ** -5:
            break
        k += 1
    return total * mp.power(t, p.n)


def theta_coefficient(
    p: SpectrumParams, m: int, ctx: NumericContext, start: int | None = None, degree: int | None = None
) -> Estimate:
    """zetabar_q(-m) = (-1)^m m! a_{n+m}, where t^n Theta(t) ~ sum_j a_j t^j.

    The small-t coefficients are obtained by exact polynomial fits of
    t^n Theta on a geometric ladder of t values (Richardson elimination of
    the other powers); two ladders of different degree give the error.
    """
    mp = ctx.mp
    start = p.q if start is None else start
    target = p.n + m
    deg = target + 14 if degree is None else degree

    def fit(d, t0, ratio):
        ts = [mp.mpf(t0) * mp.mpf(ratio) ** i for i in range(d + 1)]
        ys = [_theta(p, t, ctx, start) for t in ts]
        mat = mp.matrix([[t**e for e in range(d + 1)] for t in ts])
        sol = mp.lu_solve(mat, mp.matrix(ys))
        return sol[target]

    c1 = fit(deg, "0.08", "0.8")
    c2 = fit(deg + 2, "0.07", "0.8")
    sign = (-1) ** m * math.factorial(m)
    return Estimate(sign * c2, abs(sign) * (abs(c2 - c1) * 4 + ctx.eps))


# -- expression evaluation ---------------------------------------------------


def eval_expr(e, ctx: NumericContext) -> Estimate:
    """Numeric value of an ExtZetaExpr."""
    mp = ctx.mp

    def q(x: Fraction):
        return mp.mpf(x.numerator) / x.denominator

    val = q(e.constant)
    err = mp.zero
    if e.euler_gamma:
        val += q(e.euler_gamma) * mp.euler
    for k, c in e.zeta_prime.items():
        z = riemann_zeta_prime_neg(k, ctx)
        val += q(c) * z.value
        err += abs(q(c)) * z.error
    for k, c in e.zeta_pos.items():
        z = hurwitz_zeta(k, 1, ctx)
        val += q(c) * z.value
        err += abs(q(c)) * z.error
    for k, c in e.logs.items():
        val += q(c) * mp.log(k)
    err += ctx.eps * (abs(val) + 1) * 10
    return Estimate(val, err)
