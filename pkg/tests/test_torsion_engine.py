from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from projzeta.genfun import StructuralError
from projzeta.exact_core import QPolynomial, interpolate_poly
from projzeta.spectrum import SpectrumParams, alpha_poly
from projzeta.torsion_engine import (
    ExtZetaExpr,
    LaurentBlock,
    aggregate_coeffs,
    bold_c,
    bold_c_closed,
    eta_laurent,
    gamma_laurent,
    h_at_zero,
    h_poly,
    omega_block,
    pq_coeffs,
    pq_coeffs_any,
    printed_omega_tail,
    torsion_expr,
    torsion_parity_check,
    torsion_printed,
    w_coeff,
    xi_laurent,
    xi_laurent_bold_c,
    zetabar_prime_expr,
    zetabar_prime_parts,
    zetabar_prime_printed,
    claim39_derivatives,
)

F = Fraction
P = SpectrumParams
E = ExtZetaExpr
Z = E.zprime
L = E.log
R = E.rational

PAIRS3 = [(n, q) for n in range(1, 4) for q in range(1, n + 1)]

# frozen after agreement with derivative_at_zero (60 and 120 digits)
ZETABAR_PRIME = {
    (1, 1): Z(1, 4) + R(F(-1, 2)),
    (2, 1): Z(1, 6) + Z(3, 2) + L(2) + R(F(-2, 3)),
    (2, 2): Z(1, -3) + Z(3, 2) + R(F(25, 48)),
    (3, 1): Z(1, F(22, 3)) + Z(3, F(22, 3)) + Z(5, F(1, 3)) + L(3) + R(F(-57, 80)),
    (3, 2): Z(1, F(-14, 3)) + Z(3, 4) + Z(5, F(2, 3)) + L(2, -1) + R(F(97, 135)),
    (3, 3): Z(1, F(8, 3)) + Z(3, -2) + Z(5, F(1, 3)) + R(F(-1141, 2160)),
}
TORSION = {
    1: Z(1, 4) + R(F(-1, 2)),
    2: Z(1, 9) + L(2) + R(F(-19, 16)),
    3: Z(1, F(44, 3)) + Z(3, F(4, 3)) + L(2) + L(3) + R(F(-529, 270)),
    4: Z(1, F(125, 6)) + Z(3, F(25, 6)) + L(2, 3) + L(3) + R(F(-3203, 1152)),
}

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=50)
coeff_maps = lambda keys: st.dictionaries(keys, fracs, max_size=3)
exprs = st.builds(
    ExtZetaExpr,
    constant=fracs,
    euler_gamma=fracs,
    zeta_prime=coeff_maps(st.integers(0, 6)),
    zeta_pos=coeff_maps(st.integers(2, 6)),
    logs=coeff_maps(st.integers(2, 30)),
)


# -- ExtZetaExpr -------------------------------------------------------------


@given(exprs, exprs, exprs)
def test_expr_additive_group(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x - x).is_zero()
    assert x + E() == x


@given(exprs, exprs, fracs, fracs)
def test_expr_scaling(x, y, a, b):
    assert (x + y) * a == x * a + y * a
    assert x * (a + b) == x * a + x * b
    assert (x * a) * b == x * (a * b)


@given(exprs)
def test_expr_json_roundtrip(x):
    assert E.from_json(x.to_json()) == x


def test_expr_log_keys_reduced():
    assert L(4) == L(2, 2)
    assert L(12) == L(2, 2) + L(3)
    assert L(1).is_zero()
    assert (L(6) - L(2) - L(3)).is_zero()


def test_expr_product_requires_rational():
    with pytest.raises(StructuralError) as exc:
        Z(1) * L(2)
    assert exc.value.invariant == "basis-linearity"
    assert Z(1) * R(3) == Z(1, 3) == R(3) * Z(1)


def test_expr_str():
    assert str(Z(1, 4) + R(F(-1, 2))) == "4*zeta'(-1) - 1/2"
    assert str(Z(0)) == "1*zeta'(0)"
    assert str(E()) == "0"


# -- weights and coefficient families ----------------------------------------


@pytest.mark.parametrize("j,w", [(2, 1), (3, F(1, 2)), (4, F(5, 12))])
def test_w_examples(j, w):
    assert w_coeff(j) == w


@pytest.mark.parametrize("j", range(2, 21))
def test_w_matches_finite_difference(j):
    # h_j has degree j-1, so the centred-difference stencil of that order is exact
    h = h_poly(j)
    deg = j - 1
    pts = [F(i, 3) for i in range(-deg, deg + 1)]
    lag = interpolate_poly(list(zip(pts, [h(x) for x in pts])))
    assert lag == h
    assert lag.derivative()(0) == w_coeff(j)
    assert h(0) == h_at_zero(j)


def test_w_rejects_small_j():
    with pytest.raises(ValueError):
        w_coeff(1)


def test_pq_examples():
    assert pq_coeffs(P(1, 1)) == ([0, -1, 1], [0, 1, 1])
    assert pq_coeffs(P(2, 1))[1] == [0, F(1, 2), F(5, 4), 1, F(1, 4)]


@pytest.mark.parametrize("n", range(1, 7))
def test_pq_invariants(n):
    for q in range(1, n + 1):
        big_p, big_q = pq_coeffs(P(n, q))
        a = n + 1 - q
        assert big_p[0] == big_q[0] == 0
        assert big_p[2 * n] == big_q[2 * n] == F(1, factorial(n) ** 2)
        # l = a is a root of the first product, l = -a of the second
        assert sum(c * a**i for i, c in enumerate(big_p)) == 0
        assert sum(c * (-a) ** i for i, c in enumerate(big_q)) == 0


def test_pq_not_integral():
    assert any(F(c).denominator != 1 for c in pq_coeffs(P(2, 1))[1])


@pytest.mark.parametrize("n", range(1, 6))
def test_pq_degree_in_q(n):
    for i in range(2 * n + 1):
        qs = range(1, 2 * n + 2)
        pts_p = [(q, pq_coeffs_any(n, q)[0][i]) for q in qs]
        pts_q = [(q, pq_coeffs_any(n, q)[1][i]) for q in qs]
        assert interpolate_poly(pts_p).degree <= 2 * n - i
        assert interpolate_poly(pts_q).degree <= 2 * n - i


def test_bold_c_examples():
    assert bold_c(P(1, 1)) == ((1,), (1,))
    assert bold_c(P(2, 1)) == ((F(1, 8), F(1, 4), F(1, 8)), (F(1, 8), F(-1, 4), F(1, 8)))


@pytest.mark.parametrize("nq", [(n, q) for n in range(1, 6) for q in range(1, n + 1)])
def test_bold_c_definition(nq):
    p = P(*nq)
    c, ct = bold_c(p)
    assert QPolynomial(list(c)) == alpha_poly(p)
    for l in range(p.shift, p.shift + 6):
        assert QPolynomial(list(ct))(l) == alpha_poly(p)(l - p.shift)


def test_bold_c_closed_printed_exhibit():
    assert bold_c_closed(P(1, 1), "printed")[0] == (1,)
    c, _ = bold_c_closed(P(2, 1), "printed")
    assert c[-1] == F(1, 16) != bold_c(P(2, 1))[0][-1]


@pytest.mark.parametrize("nq", [(n, q) for n in range(1, 6) for q in range(1, n + 1)])
def test_bold_c_closed_variants(nq):
    p = P(*nq)
    c, ct = bold_c(p)
    rc, rct = bold_c_closed(p, "rescaled")
    cc, cct = bold_c_closed(p, "corrected")
    assert (cc, cct) == (c, ct)
    assert rct == ct
    # the printed sign convention flips the odd coefficients of c
    assert rc == tuple((-1) ** j * x for j, x in enumerate(c))


def test_bold_c_closed_rejects_variant():
    with pytest.raises(ValueError):
        bold_c_closed(P(1, 1), "other")


@pytest.mark.parametrize("n", range(1, 7))
def test_alternating_vanishing(n):
    for j in range(n, 2 * n - 1):
        for idx in (0, 1):
            assert sum((-1) ** q * bold_c(P(n, q))[idx][j] for q in range(1, n + 1)) == 0


def test_aggregates_n1():
    ag = aggregate_coeffs(1)
    assert ag.c == (1,) and ag.c_tilde == (1,)


# -- Laurent data ------------------------------------------------------------


def test_gamma_laurent():
    g1 = gamma_laurent(1)
    assert g1[-1].is_zero() and g1[0] == R(1) and g1[1] == E(euler_gamma=-1)
    g0 = gamma_laurent(0)
    assert g0[-1] == R(1) and g0[0] == E(euler_gamma=-1)
    assert not g0.determined(1)
    with pytest.raises(StructuralError):
        g0[1]
    assert gamma_laurent(-2)[-1] == R(F(1, 2))


def test_laurent_product_order():
    g0 = gamma_laurent(0)
    with pytest.raises(StructuralError):
        g0 * g0
    with pytest.raises(ValueError):
        g0 + gamma_laurent(1)
    # an s-vanishing factor determines the product up to s^0
    f = LaurentBlock(0, {-1: E(), 0: E(), 1: R(2)})
    prod = g0 * f
    assert prod[0] == R(2) and not prod.determined(1)


def test_xi_laurent_examples():
    p = P(1, 1)
    b0 = xi_laurent(p, 0)
    assert b0[-1].is_zero() and b0[0] == R(F(-3, 2)) and b0[1] == Z(0)
    b1 = xi_laurent(p, 1)
    assert b1[-1] == R(1) and b1[0] == E(constant=-1, euler_gamma=1)
    e = eta_laurent(p, -1)
    assert e[0] == R(F(-1, 12)) and e[1] == Z(1)
    with pytest.raises(ValueError):
        xi_laurent(p, 3)


@pytest.mark.parametrize("nq", [(n, q) for n in range(1, 5) for q in range(1, n + 1)])
def test_xi_laurent_two_routes(nq):
    p = P(*nq)
    for s0 in range(-3, 2 * p.n + 1):
        a, b = xi_laurent(p, s0), xi_laurent_bold_c(p, s0)
        for e in (-1, 0, 1):
            assert a.determined(e) == b.determined(e)
            if a.determined(e):
                assert a[e] == b[e]


# -- derivative engine -------------------------------------------------------


@pytest.mark.parametrize("nq", PAIRS3)
def test_zetabar_prime_frozen(nq):
    p = P(*nq)
    z = zetabar_prime_expr(p)
    assert z == ZETABAR_PRIME[nq]
    assert z.euler_gamma == 0 and not z.zeta_pos
    parts = zetabar_prime_parts(p)
    assert parts["omega_pole"].is_zero()
    assert omega_block(p)[-1].is_zero()


def test_zetabar_prime_hand_n1():
    # boundary 4 zeta'(-1) + 2 (xi(0) - zeta'(0)), j = 2 term 1/2, tail 2 zeta'(0) + 2
    parts = zetabar_prime_parts(P(1, 1))
    assert parts["boundary"] == Z(1, 4) + R(-3) - Z(0, 2)
    assert parts["residue_terms"] == R(F(1, 2))
    assert parts["finite_part_terms"].is_zero()
    assert parts["tail"] == Z(0, 2) + R(2)


def test_printed_exhibits_n1():
    p = P(1, 1)
    assert zetabar_prime_printed(p, "thm37ii") == Z(1, 4) - Z(0, 2) + R(-2)
    assert claim39_derivatives(p)["xi'(0)"] == Z(0) + L(2, F(1, 2))
    assert printed_omega_tail(p).is_zero()
    resid = zetabar_prime_expr(p) - zetabar_prime_printed(p, "thm37ii")
    assert resid == Z(0, 2) + R(F(3, 2))
    with pytest.raises(ValueError):
        zetabar_prime_printed(p, "other")


# -- torsion -----------------------------------------------------------------


@pytest.mark.parametrize("n", sorted(TORSION))
def test_torsion_frozen(n):
    assert torsion_expr(n) == TORSION[n]


@pytest.mark.parametrize("n", range(1, 5))
def test_torsion_parity(n):
    chk = torsion_parity_check(n)
    assert chk["holds"] and chk["offending"] == {}
    assert set(chk["expression"].zeta_prime) <= {m for m in range(1, n + 1, 2)}


def test_torsion_printed_differs():
    assert torsion_printed(1) != torsion_expr(1)


def test_torsion_rejects_n0():
    with pytest.raises(ValueError):
        torsion_expr(0)
