"""
The identity audit
==================

``build_report`` runs every identity check (exact where possible, numeric
with error bars otherwise) and collects the verdicts.  The command
``projzeta verify --n-max 2 --digits 60`` writes the same report to
report.json and report.md.
"""
from collections import Counter

from projzeta.report import build_report

report = build_report(n_max=1, digits=30, workers=4)
print("cells:", len(report.cells))
print("verdicts:", dict(sorted(Counter(c.status for c in report.cells).items())))
print("identities without a cell:", report.missing())
print("verdicts unchanged at doubled precision:", report.precision_stable())

# %%
# Refuted printed forms, with their exact residuals
for c in report.cells:
    if c.status == "refuted":
        print(f"  {c.identity:10s} {c.params} {c.residual}")
