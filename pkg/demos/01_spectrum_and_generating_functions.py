"""
Spectrum and generating functions
=================================

The Dolbeault Laplacian on (0, q)-forms of P^n splits into pieces whose
eigenvalues are k(k + n + 1 - q) with integer multiplicities.  This script
prints the first few levels, then shows that the generating series of the
normalised multiplicities is rational with a polynomial numerator.
"""
from projzeta import SpectrumParams, eigenvalue, multiplicity, r_polynomial, t_numerator
from projzeta.genfun import ode_residual

# %%
# The first levels for n = 2
# --------------------------
for q in (1, 2):
    p = SpectrumParams(2, q)
    levels = [(k, eigenvalue(p, k), multiplicity(p, k)) for k in range(q, q + 5)]
    print(f"n=2, q={q}:", ", ".join(f"lambda={lam} (x{d})" for _, lam, d in levels))

# %%
# A rational generating function
# -------------------------------
# sum_k alpha(k) z^k, corrected by a single monomial, equals R(z)/(1-z)^(2n-1)
# for a polynomial R supported on degrees q..2n-1+q.
for n, q in [(1, 1), (2, 1), (2, 2), (3, 2)]:
    r = r_polynomial(SpectrumParams(n, q))
    terms = " + ".join(f"({c})z^{k}" for k, c in sorted(r.c.items()))
    print(f"R_{n},{q}(z) = {terms}")

# %%
# The companion series T(z) = sum binom(k+q+n, k+q) binom(k+n, k) z^k has
# numerator N(z) = (1-z)^(2n+1) T(z) of degree at most 2n with N(1) = binom(2n, n).
for n, q in [(1, 1), (2, 1), (3, 3)]:
    t = t_numerator(SpectrumParams(n, q))
    print(f"N_{n},{q} = {t.numerator}, N(1) = {t.numerator(1)}")

# %%
# Both series are tied by a first-order linear differential equation; its
# residual vanishes identically to the tested order.
p = SpectrumParams(3, 2)
print("ODE residual is zero:", ode_residual(p, 40).is_zero())
