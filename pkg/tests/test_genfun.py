from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from projzeta.exact_core import QPolynomial
from projzeta.genfun import (
    StructuralError,
    ode_residual,
    printed_t_numerator,
    r_polynomial,
    s_series,
    t_numerator,
    t_series,
    zq_constant,
)
from projzeta.spectrum import SpectrumParams, alpha_poly

F = Fraction
PAIRS = [SpectrumParams(n, q) for n in range(1, 7) for q in range(1, n + 1)]


def r_oracle(p: SpectrumParams) -> QPolynomial:
    """R from the Newton expansion alpha(k) = sum_j D^j alpha(0) binom(k, j)
    and sum_k binom(k, j) z^k = z^j / (1-z)^(j+1)."""
    n, q = p.n, p.q
    ap = alpha_poly(p)
    deg = 2 * n - 2
    vals = [ap(k) for k in range(deg + 1)]
    diffs = []
    row = vals
    for _ in range(deg + 1):
        diffs.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    one_minus = QPolynomial([1, -1])
    out = QPolynomial()
    for j, dj in enumerate(diffs):
        out = out + QPolynomial([0] * j + [dj]) * one_minus ** (deg - j)
    low = QPolynomial([ap(k) for k in range(q)])
    return out - low * one_minus ** (2 * n - 1) + QPolynomial([0] * q + [zq_constant(p)]) * one_minus ** (2 * n - 1)


def test_s_series_examples():
    s = s_series(SpectrumParams(1, 1), 6)
    assert s.coeffs == (0, 1, 1, 1, 1, 1, 1)
    assert s_series(SpectrumParams(2, 1), 3).coeffs == (0, F(1, 2), F(9, 8), 2)
    with pytest.raises(ValueError):
        s_series(SpectrumParams(2, 2), 1)


def test_r_examples():
    assert r_polynomial(SpectrumParams(1, 1)).c == {1: F(3, 2), 2: F(-1, 2)}
    assert r_polynomial(SpectrumParams(2, 1)).c == {1: F(5, 6), 2: F(-11, 8), 3: F(9, 8), 4: F(-1, 3)}
    assert r_polynomial(SpectrumParams(2, 2)).c == {2: F(1), 3: F(-7, 4), 4: F(3, 2), 5: F(-1, 2)}


@pytest.mark.parametrize("p", PAIRS, ids=str)
def test_r_matches_newton_oracle(p):
    r = r_polynomial(p)
    assert r.poly() == r_oracle(p)
    assert (r.support_min, r.support_max) == (p.q, 2 * p.n - 1 + p.q)


def test_r_order_too_small():
    with pytest.raises(ValueError):
        r_polynomial(SpectrumParams(2, 1), 3)


def test_t_series_examples():
    assert t_series(SpectrumParams(1, 1), 3).coeffs == (2, 6, 12, 20)
    assert t_series(SpectrumParams(2, 1), 1).coeffs == (3, 18)


def test_t_numerator_examples():
    assert t_numerator(SpectrumParams(1, 1)).numerator == QPolynomial([2])
    assert t_numerator(SpectrumParams(2, 1)).numerator == QPolynomial([3, 3])


@pytest.mark.parametrize("p", PAIRS, ids=str)
def test_t_numerator_degree_and_value(p):
    tn = t_numerator(p)
    assert tn.numerator.degree <= 2 * p.n
    assert tn.numerator(1) == comb(2 * p.n, p.n)


def test_printed_t_form_exhibit():
    # printed closed form at (1,1): (1+z) - (1-z)^3 against the true numerator 2
    pr = printed_t_numerator(SpectrumParams(1, 1))
    assert pr == QPolynomial([1, 1]) - QPolynomial([1, -1]) ** 3
    assert not t_numerator(SpectrumParams(1, 1)).printed_agrees


@pytest.mark.parametrize("p", PAIRS, ids=str)
def test_printed_t_form_disagrees_everywhere(p):
    assert not t_numerator(p).printed_agrees


@pytest.mark.parametrize("p", PAIRS, ids=str)
def test_ode_with_normalisation(p):
    assert ode_residual(p, 4 * p.n + 8).is_zero()


def test_ode_unnormalised():
    assert ode_residual(SpectrumParams(1, 1), 10, constant=1).is_zero()
    res = ode_residual(SpectrumParams(2, 1), 10, constant=1)
    # first nonzero coefficient: 3/2 z^2 on the left against 3 z^2 on the right
    assert res.valuation() == 2 and res[2] == F(-3, 2)
    with pytest.raises(ValueError):
        ode_residual(SpectrumParams(2, 1), 3)


def test_structural_error_names_invariant():
    err = StructuralError("claim3.1-polynomiality", "detail")
    assert err.invariant == "claim3.1-polynomiality" and "detail" in str(err)
    assert isinstance(err, ArithmeticError)
