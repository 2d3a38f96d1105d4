"""
Derivatives at zero and the analytic torsion
============================================

zetabar_q'(0) is an exact combination of zeta'(-p), logarithms of integers
and a rational constant.  The Laurent assembly keeps track of every pole
and of Euler's constant, which must cancel; the result is then checked
against a central difference of the numerically continued function.
"""
from projzeta import SpectrumParams, torsion_expr, zetabar_prime_expr
from projzeta.numerics import NumericContext, derivative_at_zero, eval_expr
from projzeta.torsion_engine import torsion_parity_check, zetabar_prime_parts

ctx = NumericContext(60)

# %%
# zetabar_q'(0)
# -------------
for n, q in [(1, 1), (2, 1), (2, 2), (3, 2)]:
    p = SpectrumParams(n, q)
    e = zetabar_prime_expr(p)
    exact = eval_expr(e, ctx)
    num = derivative_at_zero(p, ctx)
    print(f"({n},{q}) {e}")
    print(f"      = {ctx.mp.nstr(exact.value, 25)}, difference quotient {ctx.mp.nstr(num.value, 25)}")

# %%
# The pieces of the assembly for P^1: boundary terms, residues, finite
# parts and the tail of the series.
for name, part in zetabar_prime_parts(SpectrumParams(1, 1)).items():
    print(f"  {name:18s} {part}")

# %%
# Torsion
# -------
# sum_q (-1)^(q+1) q zeta_q'(0) telescopes into an alternating sum of the
# zetabar pieces.  Only zeta'(-m) with m odd and m <= n survive.
for n in range(1, 5):
    t = torsion_expr(n)
    chk = torsion_parity_check(n)
    print(f"n={n}: {t}  ~ {ctx.mp.nstr(eval_expr(t, ctx).value, 20)}  (odd-only: {chk['holds']})")
