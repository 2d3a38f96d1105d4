"""
Values at non-positive integers
===============================

zetabar_q(-m) is rational for every m >= 0.  The exact values come from the
binomial splitting of (k(k+a))^-s into shifted Dirichlet series whose
values at negative integers are Bernoulli polynomials.  Two numerical
continuations, one through the same splitting evaluated off the integers
and one through the small-t expansion of the heat trace, confirm them.
"""
from projzeta import SpectrumParams, zetabar_neg, zeta_q_neg
from projzeta.numerics import NumericContext, continue_at, theta_coefficient
from projzeta.special_values import p1_zeta_neg

# %%
# Exact table
# -----------
for n in (1, 2, 3):
    for q in range(1, n + 1):
        p = SpectrumParams(n, q)
        print(f"n={n} q={q}:", [str(zetabar_neg(p, m)) for m in range(4)])

# %%
# On P^1 there is a closed form; it reproduces the general values.
print("P^1:", [str(p1_zeta_neg(m)) for m in range(5)])

# %%
# zeta_q itself is the sum of two consecutive zetabar pieces.
p = SpectrumParams(3, 2)
print("zeta_2(-1) on P^3 =", zeta_q_neg(p, 1))

# %%
# Independent numerical confirmation
# ----------------------------------
ctx = NumericContext(30)
p = SpectrumParams(2, 1)
for m in range(3):
    exact = zetabar_neg(p, m)
    c = continue_at(p, -m, ctx)
    t = theta_coefficient(p, m, ctx)
    print(f"m={m}: exact {float(exact):+.15f}  series {float(c):+.15f}  heat trace {float(t):+.15f}")
