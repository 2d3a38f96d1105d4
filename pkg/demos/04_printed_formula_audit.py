"""
Auditing printed closed forms
=============================

Several closed forms for these quantities circulate in print.  Each one is
evaluated verbatim next to the recomputed value, and the difference is
reported as an exact residual.  The full audit is ``projzeta verify``.
"""
from fractions import Fraction

from projzeta import SpectrumParams
from projzeta.numerics import NumericContext, eval_expr
from projzeta.special_values import PRINTED, zetabar_neg
from projzeta.torsion_engine import (
    bold_c,
    bold_c_closed,
    printed_omega_tail,
    zetabar_prime_expr,
    zetabar_prime_parts,
    zetabar_prime_printed,
)

ctx = NumericContext(60)
p = SpectrumParams(1, 1)

# %%
# Values at negative integers
# ---------------------------
printed = zetabar_neg(p, 1, PRINTED)
print("printed zetabar(-1) =", printed, " true =", zetabar_neg(p, 1), " residual =", printed - zetabar_neg(p, 1))

# %%
# The derivative at zero
# ----------------------
good = zetabar_prime_expr(p)
bad = zetabar_prime_printed(p, "thm37ii")
resid = good - bad
print("printed:", bad)
print("true:   ", good)
print("true - printed =", resid, "~", ctx.mp.nstr(eval_expr(resid, ctx).value, 12))
print("tail of the series: printed", printed_omega_tail(p), "true", zetabar_prime_parts(p)["tail"])

# %%
# Coefficient closed forms
# ------------------------
# The closed forms for the Taylor coefficients need an extra factor n+1-q,
# and the sign must follow i-j, not i.
p = SpectrumParams(2, 1)
print("coefficients      ", [str(x) for x in bold_c(p)[0]])
for variant in ("printed", "rescaled", "corrected"):
    print(f"{variant:18s}", [str(x) for x in bold_c_closed(p, variant)[0]])
print("ratio of top coefficients:", Fraction(bold_c(p)[0][-1]) / bold_c_closed(p, "printed")[0][-1])
