from __future__ import annotations

from collections import Counter
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from projzeta.spectrum import (
    SpectrumParams,
    alpha,
    alpha_poly,
    eigenvalue,
    multiplicity,
    multiplicity_scale,
    spectral_terms,
    telescoped_coefficients,
    zeta_components,
)

PAIRS = [(n, q) for n in range(1, 9) for q in range(1, n + 1)]
params = st.sampled_from(PAIRS).map(lambda t: SpectrumParams(*t))


def displayed_multiplicity(n, q, k):
    # (1/k + 1/(k+a)) (k+n)!(k+n-q)! / (k!(k-q)! n!(n-q)!(q-1)!)
    a = n + 1 - q
    return (Fraction(1, k) + Fraction(1, k + a)) * Fraction(
        factorial(k + n) * factorial(k + n - q),
        factorial(k) * factorial(k - q) * factorial(n) * factorial(n - q) * factorial(q - 1),
    )


def test_params_validation():
    with pytest.raises(ValueError):
        SpectrumParams(0, 1)
    with pytest.raises(ValueError):
        SpectrumParams(2, 3)
    with pytest.raises(ValueError):
        SpectrumParams(2, 0)
    assert SpectrumParams(3, 1).shift == 3


def test_multiplicity_examples():
    assert [multiplicity(SpectrumParams(1, 1), k) for k in range(1, 6)] == [3, 5, 7, 9, 11]
    assert multiplicity(SpectrumParams(2, 1), 1) == 8
    assert multiplicity(SpectrumParams(2, 2), 2) == 10
    with pytest.raises(ValueError):
        multiplicity(SpectrumParams(2, 2), 1)


@given(params, st.integers(0, 200))
def test_multiplicity_matches_display(p, dk):
    k = p.q + dk
    d = multiplicity(p, k)
    assert isinstance(d, int) and d > 0
    assert d == displayed_multiplicity(p.n, p.q, k)
    assert d == multiplicity_scale(p.n) * (2 * k + p.shift) * alpha(p, k)


def test_alpha_examples():
    assert all(alpha(SpectrumParams(1, 1), k) == 1 for k in range(1, 30))
    assert all(alpha(SpectrumParams(2, 1), k) == Fraction((k + 1) ** 2, 8) for k in range(1, 30))
    assert all(alpha(SpectrumParams(2, 2), k) == Fraction((k + 2) * (k - 1), 8) for k in range(2, 30))


def test_alpha_poly_examples():
    assert alpha_poly(SpectrumParams(1, 1)).coeffs == (1,)
    assert alpha_poly(SpectrumParams(2, 1)).coeffs == (Fraction(1, 8), Fraction(1, 4), Fraction(1, 8))
    assert alpha_poly(SpectrumParams(2, 2)).coeffs == (Fraction(-1, 4), Fraction(1, 8), Fraction(1, 8))


@given(params, st.integers(0, 200))
def test_alpha_poly_agrees(p, dk):
    k = p.q + dk
    assert alpha_poly(p).degree == 2 * p.n - 2
    assert alpha_poly(p)(k) == alpha(p, k) > 0


def test_eigenvalues_and_components():
    assert eigenvalue(SpectrumParams(1, 1), 1) == 2
    assert eigenvalue(SpectrumParams(2, 1), 1) == 3
    # k(k + n + 1 - q) at (2, 2, 2) is 2 * 3
    assert eigenvalue(SpectrumParams(2, 2), 2) == 6
    assert zeta_components(SpectrumParams(3, 1)) == [1, 2]
    assert zeta_components(SpectrumParams(3, 3)) == [3]
    assert zeta_components(SpectrumParams(1, 1)) == [1]
    with pytest.raises(OverflowError):
        eigenvalue(SpectrumParams(1, 1), 2**40)


def test_spectral_terms():
    rows = spectral_terms(SpectrumParams(2, 1), 6)
    assert [r.k for r in rows] == list(range(1, 7))
    lams = [r.eigenvalue for r in rows]
    assert lams == sorted(set(lams))
    assert spectral_terms(SpectrumParams(2, 1), 6, start=2)[0].k == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_telescoping(n):
    full, half = telescoped_coefficients(n, 3000)
    assert full == half
    # independent multiset check straight from the definitions
    direct = Counter()
    for q in range(1, n + 1):
        for comp in zeta_components(SpectrumParams(n, q)):
            p = SpectrumParams(n, comp)
            k = comp
            while eigenvalue(p, k) <= 3000:
                direct[eigenvalue(p, k)] += (-1) ** (q + 1) * q * multiplicity(p, k)
                k += 1
    assert {k: v for k, v in direct.items() if v} == full
