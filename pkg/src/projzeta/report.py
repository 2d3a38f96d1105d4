"""Identity audit: every printed identity is re-checked against the
definition-first computation or a numeric oracle, per parameter cell.

Exact cells are labelled verified/refuted with an exact residual; numeric
cells are labelled numeric-agree/numeric-disagree with a value and error
bar.  Residuals are always ``printed - reference``.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable

import mpmath

from . import numerics as nm
from .exact_core import QPolynomial, interpolate_poly, rising_binomial_coeffs
from .genfun import ode_residual, r_polynomial, t_numerator
from .special_values import (
    CORRECTED,
    PRINTED,
    gamma_residue,
    multi_hurwitz_neg,
    p1_zeta_neg,
    xi_value_neg,
    xi_value_neg_bernoulli,
    zetabar_neg,
)
from .spectrum import SpectrumParams, alpha, multiplicity, multiplicity_scale, telescoped_coefficients
from .torsion_engine import (
    ExtZetaExpr,
    bold_c,
    bold_c_closed,
    claim39_derivatives,
    pq_coeffs,
    pq_coeffs_any,
    printed_omega_tail,
    printed_thm37i,
    torsion_expr,
    torsion_parity_check,
    torsion_printed,
    true_derivatives,
    zetabar_prime_expr,
    zetabar_prime_parts,
    zetabar_prime_printed,
)

VERIFIED = "verified"
REFUTED = "refuted"
AGREE = "numeric-agree"
DISAGREE = "numeric-disagree"

# identity id -> short description
IDENTITIES = {
    "fin1": "telescoping of the alternating q-weighted sum into zetabar_q",
    "e4": "multiplicity d(k) = (2k + n + 1 - q) alpha(k)",
    "thm2.1": "Bernoulli closed form of the P^1 values",
    "claim3.1": "S = R/(1-z)^(2n-1) - C0 z^q with deg R <= 2n-1",
    "texp": "ODE linking S and T",
    "r1": "closed form of T through the G_{n+1} coefficients",
    "claim3.4": "multiple Hurwitz values and residues",
    "gamma": "residues of xi_q",
    "prop3.5": "Bernoulli assembly of xi_q(-l)",
    "claim-n1": "binomial-splitting series for zetabar_q",
    "thm3.6": "values zetabar_q(-m)",
    "thm3.7i": "xi'/eta' at 0 and -1",
    "thm3.7ii": "closed form of zetabar_q'(0)",
    "omega": "tail of the j > 2n sum",
    "pq": "expansion coefficients P_i(q), Q_i(q)",
    "prop3.8.1": "closed forms of the bold-c coefficients",
    "prop3.8.2": "alternating vanishing of bold-c for j >= n",
    "claim3.9": "bold-c form of the derivatives",
    "cor3.10": "P/Q form of zetabar_q'(0)",
    "thm3.11": "aggregate formula for the torsion",
    "sec1-parity": "torsion involves zeta'(-m) only for odd m <= n",
}


@dataclass
class Cell:
    identity: str
    params: dict
    variant: str
    status: str
    residual: object
    precision: object = "exact"
    note: str = ""

    def to_json(self) -> dict:
        res = self.residual
        if isinstance(res, ExtZetaExpr):
            res = {"expr": res.to_json(), "text": str(res)}
        elif isinstance(res, Fraction):
            res = str(res)
        return {
            "identity": self.identity,
            "params": self.params,
            "variant": self.variant,
            "status": self.status,
            "residual": res,
            "precision": self.precision,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    n_max: int
    digits: int
    cells: list = field(default_factory=list)

    def covered(self) -> set:
        return {c.identity for c in self.cells}

    def missing(self) -> list:
        return sorted(set(IDENTITIES) - self.covered())

    def precision_stable(self) -> bool:
        """Numeric verdicts repeated at several precisions agree."""
        seen: dict = {}
        for c in self.cells:
            if c.precision == "exact":
                continue
            key = (c.identity, json.dumps(c.params, sort_keys=True), c.variant)
            seen.setdefault(key, set()).add(c.status)
        return all(len(v) == 1 for v in seen.values())

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "digits": self.digits,
            "identities": IDENTITIES,
            "missing": self.missing(),
            "precision_stable": self.precision_stable(),
            "cells": [c.to_json() for c in self.cells],
        }

    def to_markdown(self) -> str:
        lines = [
            "# Identity audit",
            "",
            f"n <= {self.n_max}, {self.digits} digits (numeric cells repeated at {2 * self.digits} where marked).",
            "Residuals are printed minus reference.",
            "",
        ]
        counts: dict = {}
        for c in self.cells:
            counts[c.status] = counts.get(c.status, 0) + 1
        lines.append("Totals: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
        lines.append("")
        lines.append("| identity | params | variant | status | residual | precision |")
        lines.append("|---|---|---|---|---|---|")
        for c in self.cells:
            res = c.to_json()["residual"]
            if isinstance(res, dict) and "text" in res:
                res = res["text"]
            elif isinstance(res, dict):
                res = f"{res['value']} +- {res['error']}"
            params = ", ".join(f"{k}={v}" for k, v in c.params.items())
            lines.append(
                f"| {c.identity} | {params} | {c.variant} | {c.status} | {str(res).replace('|', '/')} | {c.precision} |"
            )
        return "\n".join(lines) + "\n"


def _exact(identity, params, variant, residual, note="") -> Cell:
    zero = residual.is_zero() if isinstance(residual, ExtZetaExpr) else residual == 0
    return Cell(identity, params, variant, VERIFIED if zero else REFUTED, residual, "exact", note)


def _numeric(identity, params, variant, diff, err, tol, digits, note="") -> Cell:
    ok = abs(diff) <= tol + err
    return Cell(
        identity,
        params,
        variant,
        AGREE if ok else DISAGREE,
        {"value": mpmath.nstr(diff, 8), "error": mpmath.nstr(err + tol, 3)},
        digits,
        note,
    )


def _pairs(n_max: int):
    return [SpectrumParams(n, q) for n in range(1, n_max + 1) for q in range(1, n + 1)]


def _mpq(mp, x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


# -- exact cells -------------------------------------------------------------


def exact_cells(n_max: int) -> list[Cell]:
    cells: list[Cell] = []
    for n in range(1, n_max + 1):
        full, half = telescoped_coefficients(n, 400)
        diff = sum(abs(full.get(k, 0) - half.get(k, 0)) for k in set(full) | set(half))
        cells.append(_exact("fin1", {"n": n}, "definition", Fraction(diff)))
    for p in _pairs(n_max):
        pr = {"n": p.n, "q": p.q}
        # d(k) / ((2k + a) alpha(k)) is the same for every k
        ratio = multiplicity(p, p.q) / ((2 * p.q + p.shift) * alpha(p, p.q))
        cells.append(_exact("e4", pr, PRINTED, ratio - 1, note=f"d/((2k+a)alpha) = {ratio}"))
        scaled = max(
            abs(multiplicity(p, k) - multiplicity_scale(p.n) * (2 * k + p.shift) * alpha(p, k))
            for k in range(p.q, 61)
        )
        cells.append(_exact("e4", pr, "scaled by (n!)^2", Fraction(scaled)))
    for m in range(0, 11):
        cells.append(_exact("thm2.1", {"m": m}, "definition", p1_zeta_neg(m) - zetabar_neg(SpectrumParams(1, 1), m)))
    for p in _pairs(n_max):
        pr = {"n": p.n, "q": p.q}
        r = r_polynomial(p)
        cells.append(
            _exact("claim3.1", pr, PRINTED, Fraction(max(0, r.support_max - (2 * p.n - 1))),
                   note=f"computed support {r.support_min}..{r.support_max}")
        )
        cells.append(_exact("claim3.1", pr, CORRECTED, Fraction(max(0, r.support_max - (2 * p.n - 1 + p.q)))))
        res_c = ode_residual(p, 4 * p.n + 6)
        cells.append(_exact("texp", pr, CORRECTED, Fraction(0 if res_c.is_zero() else 1)))
        res_1 = ode_residual(p, 4 * p.n + 6, constant=1)
        note = "" if res_1.is_zero() else f"first nonzero z^{res_1.valuation()}: {res_1[res_1.valuation()]}"
        cells.append(_exact("texp", pr, PRINTED, Fraction(0) if res_1.is_zero() else res_1[res_1.valuation()], note))
        tn = t_numerator(p)
        gap = tn.printed_numerator - tn.numerator
        gap_zero = gap == QPolynomial()
        cells.append(
            _exact("r1", pr, PRINTED, Fraction(0 if gap_zero else 1),
                   note=f"printed numerator minus true: {gap.coeffs}" if not gap_zero else "")
        )
        for l in range(0, 4):
            cells.append(_exact("prop3.5", {**pr, "l": l}, PRINTED, xi_value_neg_bernoulli(p, l, sign=1) - xi_value_neg(p, l)))
            cells.append(_exact("prop3.5", {**pr, "l": l}, CORRECTED, xi_value_neg_bernoulli(p, l, sign=-1) - xi_value_neg(p, l)))
        for m in range(1, 4):
            cells.append(
                _exact("thm3.6", {**pr, "m": m}, PRINTED, zetabar_neg(p, m, PRINTED) - zetabar_neg(p, m),
                       note="reference: corrected value, certified by the numeric cells")
            )
        # thm 3.7 i and claim 3.9 derivative formulas
        true = true_derivatives(p)
        for name, val in printed_thm37i(p).items():
            cells.append(_exact("thm3.7i", {**pr, "quantity": name}, PRINTED, val - true[name]))
        for name, val in claim39_derivatives(p).items():
            cells.append(_exact("claim3.9", {**pr, "quantity": name}, PRINTED, val - true[name]))
        corrected = zetabar_prime_expr(p)
        cells.append(_exact("thm3.7ii", pr, PRINTED, zetabar_prime_printed(p, "thm37ii") - corrected))
        cells.append(_exact("claim3.9", {**pr, "quantity": "zetabar'(0)"}, PRINTED, zetabar_prime_printed(p, "claim39") - corrected))
        cells.append(_exact("cor3.10", pr, PRINTED, zetabar_prime_printed(p, "cor310") - corrected))
        cells.append(
            _exact("cor3.10", pr, "vs printed claim 3.9",
                   zetabar_prime_printed(p, "cor310") - zetabar_prime_printed(p, "claim39"))
        )
        tail = zetabar_prime_parts(p)["tail"]
        cells.append(_exact("omega", pr, PRINTED, printed_omega_tail(p) - tail, note=f"true tail {tail}"))
        # P/Q
        big_p, big_q = pq_coeffs(p)
        dens = sorted({x.denominator for x in big_p + big_q})
        cells.append(_exact("pq", pr, "integrality", Fraction(0 if dens == [1] else max(dens)), note=f"denominators {dens}"))
        top = Fraction(1, factorial(p.n) ** 2)
        a = p.shift
        vals = (
            abs(big_p[-1] - top) + abs(big_q[-1] - top)
            + abs(sum(c * a**i for i, c in enumerate(big_p)))
            + abs(sum(c * (-a) ** i for i, c in enumerate(big_q)))
        )
        cells.append(_exact("pq", pr, "top coefficient and zeros", vals))
        c, ct = bold_c(p)
        for variant in ("printed", "rescaled", "corrected"):
            cc, cct = bold_c_closed(p, variant)
            dev = max(abs(x - y) for x, y in zip(cc + cct, c + ct))
            cells.append(_exact("prop3.8.1", pr, variant, dev))
    for n in range(1, n_max + 1):
        # degree of q -> P_i(q) is at most 2n - i
        worst = 0
        for i in range(2 * n + 1):
            samples = [(Fraction(q), pq_coeffs_any(n, q)[0][i]) for q in range(1, 2 * n + 2)]
            deg = interpolate_poly(samples).degree
            worst = max(worst, deg - (2 * n - i))
        cells.append(_exact("pq", {"n": n}, "degree in q", Fraction(max(0, worst))))
        for j in range(n, 2 * n - 1):
            s = sum((-1) ** q * bold_c(SpectrumParams(n, q))[0][j] for q in range(1, n + 1))
            cells.append(_exact("prop3.8.2", {"n": n, "j": j}, "definition", s))
        if n == 1:
            cells.append(_exact("prop3.8.2", {"n": 1}, "definition", Fraction(0), note="no index j with n <= j <= 2n-2"))
        cells.append(_exact("thm3.11", {"n": n}, PRINTED, torsion_printed(n) - torsion_expr(n)))
        chk = torsion_parity_check(n)
        off = ExtZetaExpr(zeta_prime=chk["offending"])
        cells.append(_exact("sec1-parity", {"n": n}, "structural", off, note=str(chk["expression"])))
    return cells


# -- numeric cells -----------------------------------------------------------


def _numeric_tasks(n_max: int, digits: int) -> list[Callable[[], list[Cell]]]:
    tasks: list = []
    hi = 2 * digits

    def claim34(n, digits=digits):
        ctx = nm.NumericContext(precision=digits)
        mp = ctx.mp
        out = []
        b = rising_binomial_coeffs(2 * n - 2)
        for l, a in ((0, 1), (1, 2), (2, 3)):
            val = mp.zero
            err = mp.zero
            for i in range(2 * n - 1):
                for pp in range(i + 1):
                    z = nm.hurwitz_zeta(-l - pp, a, ctx)
                    w = _mpq(mp, b[i] * Fraction(-a) ** (i - pp) * comb(i, pp))
                    val += w * z.value
                    err += abs(w) * z.error
            diff = _mpq(mp, multi_hurwitz_neg(n, l, a)) - val
            out.append(_numeric("claim3.4", {"n": n, "l": l, "a": a}, "definition", diff, err, ctx.tol() * 100, digits))
        return out

    def gamma_cells(p, digits=digits):
        ctx = nm.NumericContext(precision=digits)
        out = []
        for l in range(1, 2 * p.n):
            r = nm.numeric_residue(p, l, ctx)
            diff = r.value - _mpq(ctx.mp, gamma_residue(p, l))
            out.append(_numeric("gamma", {"n": p.n, "q": p.q, "l": l}, "definition", diff, r.error, ctx.tol(), digits))
        return out

    def claim_n1(p, digits=digits):
        ctx = nm.NumericContext(precision=digits)
        out = []
        for s in ("0.5", "1.25", "2.75"):
            x = ctx.mp.mpf(p.n) + ctx.mp.mpf(s)
            a = nm.zetabar_direct(p, x, ctx)
            b = nm.claim_n1_eval(p, x, ctx)
            tol = ctx.mp.mpf(10) ** (-(digits - 15))
            out.append(_numeric("claim-n1", {"n": p.n, "q": p.q, "s": f"n+{s}"}, "definition",
                                a.value - b.value, a.error + b.error, tol, digits))
        return out

    def thm36(p, m, digits=digits):
        ctx = nm.NumericContext(precision=digits)
        exact = _mpq(ctx.mp, zetabar_neg(p, m))
        c = nm.continue_at(p, -m, ctx)
        th = nm.theta_coefficient(p, m, ctx)
        pr = {"n": p.n, "q": p.q, "m": m}
        tol = ctx.mp.mpf(10) ** -15
        return [
            _numeric("thm3.6", pr, CORRECTED + " vs continuation", exact - c.value, c.error, tol, digits),
            _numeric("thm3.6", pr, CORRECTED + " vs heat trace", exact - th.value, th.error, ctx.mp.mpf(10) ** -8, digits),
        ]

    def thm36_printed(digits):
        ctx = nm.NumericContext(precision=digits)
        p = SpectrumParams(1, 1)
        c = nm.continue_at(p, -1, ctx)
        diff = _mpq(ctx.mp, zetabar_neg(p, 1, PRINTED)) - c.value
        cell = _numeric("thm3.6", {"n": 1, "q": 1, "m": 1}, PRINTED + " vs continuation",
                        diff, c.error, ctx.mp.mpf(10) ** -15, digits, note="expected residual 17/120")
        return [cell]

    def thm37(p, digits=digits):
        ctx = nm.NumericContext(precision=digits)
        d = nm.derivative_at_zero(p, ctx)
        pr = {"n": p.n, "q": p.q}
        tol = ctx.mp.mpf(10) ** (-(digits // 6))
        out = [_numeric("thm3.7ii", pr, CORRECTED + " vs numeric derivative",
                        nm.eval_expr(zetabar_prime_expr(p), ctx).value - d.value, d.error, tol, digits)]
        printed = nm.eval_expr(zetabar_prime_printed(p, "thm37ii"), ctx).value
        out.append(_numeric("thm3.7ii", pr, PRINTED + " vs numeric derivative", printed - d.value, d.error, tol, digits))
        return out

    def torsion_num(n, digits=digits):
        ctx = nm.NumericContext(precision=digits)
        total = ctx.mp.zero
        err = ctx.mp.zero
        for q in range(1, n + 1):
            d = nm.derivative_at_zero(SpectrumParams(n, q), ctx)
            total += (-1) ** (q + 1) * d.value
            err += d.error
        ex = nm.eval_expr(torsion_expr(n), ctx).value
        return [_numeric("thm3.11", {"n": n}, CORRECTED + " vs numeric derivatives", ex - total, err,
                         ctx.mp.mpf(10) ** -8, digits)]

    for n in range(1, n_max + 1):
        tasks.append(lambda n=n: claim34(n))
        tasks.append(lambda n=n: torsion_num(n))
    for p in _pairs(n_max):
        tasks.append(lambda p=p: gamma_cells(p))
        tasks.append(lambda p=p: claim_n1(p))
        tasks.append(lambda p=p: thm37(p))
        for m in range(0, 3):
            tasks.append(lambda p=p, m=m: thm36(p, m))
    # precision-stability reruns of the key exhibits
    p11 = SpectrumParams(1, 1)
    for dg in (digits, hi):
        tasks.append(lambda dg=dg: thm36_printed(dg))
    tasks.append(lambda: thm37(p11, hi))
    tasks.append(lambda: thm36(p11, 1, hi))
    return tasks


def build_report(n_max: int = 2, digits: int = 60, workers: int = 4) -> VerificationReport:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    report = VerificationReport(n_max, digits)
    tasks = _numeric_tasks(n_max, digits)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(t) for t in tasks]
        exact = exact_cells(n_max)
        numeric = [c for f in futures for c in f.result()]
    report.cells = exact + numeric
    return report
