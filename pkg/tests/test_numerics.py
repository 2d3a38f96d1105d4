from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projzeta.exact_core import bernoulli_polynomial
from projzeta.numerics import (
    ConvergenceError,
    NumericContext,
    PoleProximityError,
    claim_n1_eval,
    continue_at,
    derivative_at_zero,
    eval_expr,
    hurwitz_zeta,
    hurwitz_zeta_deriv,
    numeric_residue,
    riemann_zeta_prime_neg,
    theta_coefficient,
    xi_numeric,
    zetabar_direct,
)
from projzeta.special_values import gamma_residue, xi_value_neg, zetabar_neg
from projzeta.spectrum import SpectrumParams, multiplicity
from projzeta.torsion_engine import ExtZetaExpr, zetabar_prime_expr

P = SpectrumParams
F = Fraction


@pytest.fixture(scope="module")
def ctx():
    return NumericContext(40)


def mpq(ctx, x):
    x = Fraction(x)
    return ctx.mp.mpf(x.numerator) / x.denominator


def test_context_floor():
    with pytest.raises(ValueError):
        NumericContext(20)


@given(st.integers(0, 10), st.integers(1, 10))
@settings(max_examples=30)
def test_hurwitz_bernoulli(l, a):
    ctx = NumericContext(30)
    est = hurwitz_zeta(-l, a, ctx)
    exact = -bernoulli_polynomial(l + 1)(F(a)) / (l + 1)
    assert abs(est.value - mpq(ctx, exact)) < mpmath.mpf(10) ** -20
    assert est.error < mpmath.mpf(10) ** -20


def test_hurwitz_examples(ctx):
    assert abs(hurwitz_zeta(-1, 2, ctx).value + mpq(ctx, F(13, 12))) < ctx.mp.mpf(10) ** -30
    assert abs(hurwitz_zeta(-2, 1, ctx).value) < ctx.tol()
    d = hurwitz_zeta_deriv(0, 1, ctx)
    assert abs(d.value + ctx.mp.log(2 * ctx.mp.pi) / 2) < ctx.mp.mpf(10) ** -35


def test_hurwitz_errors(ctx):
    with pytest.raises(PoleProximityError):
        hurwitz_zeta(1, 1, ctx)
    with pytest.raises(ValueError):
        hurwitz_zeta(2, 0, ctx)


@pytest.mark.parametrize("s,a", [("0.5", 3), ("2.5", "1.5"), ("-3.25", 2), (5, 7)])
def test_hurwitz_against_mpmath(ctx, s, a):
    mp = ctx.mp
    for deriv, fn in ((0, hurwitz_zeta), (1, hurwitz_zeta_deriv)):
        ref = mp.zeta(mp.mpf(s), mp.mpf(a), derivative=deriv)
        assert abs(fn(s, a, ctx).value - ref) < mp.mpf(10) ** -35


def test_zeta_prime_constants(ctx):
    mp = ctx.mp
    tol = mp.mpf(10) ** -35
    assert abs(riemann_zeta_prime_neg(0, ctx).value + mp.log(2 * mp.pi) / 2) < tol
    assert abs(riemann_zeta_prime_neg(1, ctx).value - (mp.mpf(1) / 12 - mp.log(mp.glaisher))) < tol
    assert abs(riemann_zeta_prime_neg(2, ctx).value + mp.zeta(3) / (4 * mp.pi**2)) < tol


def test_xi_numeric_matches_exact(ctx):
    for nq in [(1, 1), (2, 1), (3, 2)]:
        p = P(*nq)
        for l in range(3):
            assert abs(xi_numeric(p, -l, ctx).value - mpq(ctx, xi_value_neg(p, l))) < ctx.mp.mpf(10) ** -30


def test_numeric_residue(ctx):
    p = P(2, 1)
    for l in (1, 2, 3):
        est = numeric_residue(p, l, ctx)
        assert abs(est.value - mpq(ctx, gamma_residue(p, l))) <= est.error


def test_direct_examples(ctx):
    est = zetabar_direct(P(1, 1), 2, ctx)
    assert abs(est.value - 1) < ctx.mp.mpf(10) ** -20
    with pytest.raises(ValueError):
        zetabar_direct(P(2, 1), 2, ctx)


@pytest.mark.parametrize("nq,s", [((1, 1), 2), ((1, 1), "1.5"), ((1, 1), 3), ((2, 2), 3), ((2, 1), 4), ((3, 1), "3.7")])
def test_claim_n1_matches_direct(ctx, nq, s):
    p = P(*nq)
    a = zetabar_direct(p, s, ctx)
    b = claim_n1_eval(p, s, ctx)
    assert abs(a.value - b.value) < ctx.mp.mpf(10) ** -(ctx.precision - 15)


def test_claim_n1_complex(ctx):
    p = P(2, 1)
    s = ctx.mp.mpc(3, 1)
    assert abs(zetabar_direct(p, s, ctx).value - claim_n1_eval(p, s, ctx).value) < ctx.mp.mpf(10) ** -25


def test_claim_n1_pole(ctx):
    with pytest.raises(PoleProximityError):
        claim_n1_eval(P(2, 1), 1, ctx)


@pytest.mark.parametrize("nq,m", [((1, 1), 0), ((1, 1), 1), ((1, 1), 2), ((2, 1), 0), ((2, 2), 3), ((3, 3), 1)])
def test_continue_at(ctx, nq, m):
    p = P(*nq)
    est = continue_at(p, -m, ctx)
    exact = mpq(ctx, zetabar_neg(p, m))
    assert abs(est.value - exact) < mpmath.mpf(10) ** -15
    assert abs(est.value - exact) <= est.error
    with pytest.raises(ValueError):
        continue_at(p, 1, ctx)


@pytest.mark.parametrize("nq,m", [((1, 1), 2), ((2, 1), 1)])
def test_continue_at_quadratic(nq, m):
    # doubling the working precision at least squares the residual (up to a
    # fixed constant)
    p = P(*nq)
    res = []
    for d in (30, 60):
        c = NumericContext(d)
        res.append(abs(continue_at(p, -m, c).value - mpq(c, zetabar_neg(p, m))))
    assert res[1] <= res[0] ** 2 * mpmath.mpf(10) ** 15


@pytest.mark.parametrize("nq,m", [((1, 1), 0), ((1, 1), 1), ((2, 1), 0), ((3, 2), 1)])
def test_theta(ctx, nq, m):
    p = P(*nq)
    est = theta_coefficient(p, m, ctx)
    assert abs(est.value - mpq(ctx, zetabar_neg(p, m))) < mpmath.mpf(10) ** -8
    assert est.error < mpmath.mpf(10) ** -8


def test_theta_start_shift(ctx):
    p = P(2, 1)
    d_q = multiplicity(p, p.q)
    lam = p.q * (p.q + p.shift)
    est = theta_coefficient(p, 1, ctx, start=p.q + 1)
    assert abs(est.value - mpq(ctx, zetabar_neg(p, 1) - d_q * lam)) < mpmath.mpf(10) ** -8


@pytest.mark.parametrize("nq", [(1, 1), (2, 2), (3, 1)])
def test_derivative_at_zero(nq):
    c = NumericContext(60)
    p = P(*nq)
    est = derivative_at_zero(p, c)
    exact = eval_expr(zetabar_prime_expr(p), c)
    assert abs(est.value - exact.value) < mpmath.mpf(10) ** -10
    assert abs(est.value - exact.value) <= est.error + exact.error


def test_eval_expr_examples(ctx):
    mp = ctx.mp
    e = ExtZetaExpr.zprime(1, 4) + ExtZetaExpr.rational(F(-1, 2))
    v = eval_expr(e, ctx)
    assert abs(v.value - mp.mpf("-1.161684574801803716855678640")) < mp.mpf(10) ** -25
    assert v.error < mp.mpf(10) ** -(ctx.precision - 5)
    assert abs(eval_expr(ExtZetaExpr.rational(F(8, 315)), ctx).value - mp.mpf(8) / 315) < ctx.tol()
    assert abs(eval_expr(ExtZetaExpr.log(2, F(1, 2)), ctx).value - mp.log(2) / 2) < ctx.tol()
    g = ExtZetaExpr(euler_gamma=1, zeta_pos={3: 1})
    assert abs(eval_expr(g, ctx).value - mp.euler - mp.zeta(3)) < mp.mpf(10) ** -30


def test_error_bounds_conservative():
    lo, hi = NumericContext(30), NumericContext(60)
    cases = [
        lambda c: hurwitz_zeta("-2.5", 3, c),
        lambda c: hurwitz_zeta_deriv(-3, "2.5", c),
        lambda c: claim_n1_eval(P(2, 1), "-0.75", c),
        lambda c: continue_at(P(2, 2), -1, c),
        lambda c: xi_numeric(P(3, 1), "-1.5", c),
    ]
    for f in cases:
        a, b = f(lo), f(hi)
        assert abs(a.value - b.value) <= a.error


def test_convergence_error_type():
    assert issubclass(ConvergenceError, ArithmeticError)
