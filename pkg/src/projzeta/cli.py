"""``projzeta`` command-line front end.

Exit codes: 0 success, 2 usage error, 3 structural invariant failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from . import numerics as nm
from .cache import ResultCache, atomic_write, default_cache_dir
from .genfun import StructuralError, ode_residual, r_polynomial, t_numerator
from .special_values import CORRECTED, PRINTED, zetabar_neg
from .spectrum import SpectrumParams, eigenvalue, multiplicity, spectral_terms
from .torsion_engine import ExtZetaExpr, torsion_expr, zetabar_prime_expr, zetabar_prime_printed

log = logging.getLogger("projzeta")


class UsageError(Exception):
    pass


def _rat(x: Fraction) -> str:
    return str(Fraction(x))


def dumps(obj) -> str:
    """Canonical JSON text (sorted keys, fixed indentation, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- computations ------------------------------------------------------------


def _params(args) -> SpectrumParams:
    if args.q is None:
        raise UsageError("--q is required")
    try:
        return SpectrumParams(args.n, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _first_index(p: SpectrumParams, start: str) -> int:
    return p.q if start == "q" else p.q + 1


def compute_spectrum(p: SpectrumParams, k_max: int, start: str) -> dict:
    rows = [
        {"k": t.k, "eigenvalue": t.eigenvalue, "multiplicity": t.multiplicity}
        for t in spectral_terms(p, k_max, _first_index(p, start))
    ]
    return {"n": p.n, "q": p.q, "start_index": start, "rows": rows}


def compute_genfun(p: SpectrumParams, order: int | None) -> dict:
    r = r_polynomial(p) if order is None else r_polynomial(p, order)
    tn = t_numerator(p)
    res = ode_residual(p, 4 * p.n + 6)
    res1 = ode_residual(p, 4 * p.n + 6, constant=1)
    return {
        "n": p.n,
        "q": p.q,
        "R": {str(k): _rat(c) for k, c in r.items()},
        "support": [r.support_min, r.support_max],
        "T_numerator": [_rat(c) for c in tn.numerator.coeffs],
        "diagnostics": {
            "printed_T_numerator": [_rat(c) for c in tn.printed_numerator.coeffs],
            "printed_T_agrees": tn.printed_agrees,
            "ode_residual_zero": res.is_zero(),
            "ode_residual_C1_valuation": None if res1.is_zero() else int(res1.valuation()),
        },
    }


def _drop_first_value(p: SpectrumParams, m: int) -> Fraction:
    # contribution of the k = q term to zetabar_q(-m)
    return Fraction(multiplicity(p, p.q) * eigenvalue(p, p.q) ** m)


def compute_values(p: SpectrumParams, m_max: int, variant: str, start: str) -> dict:
    rows = []
    for m in range(m_max + 1):
        try:
            v = zetabar_neg(p, m, variant)
        except ZeroDivisionError:
            rows.append({"m": m, "value": None, "note": "printed weight undefined at m = 0"})
            continue
        if start == "q+1":
            v -= _drop_first_value(p, m)
        rows.append({"m": m, "value": _rat(v)})
    return {"n": p.n, "q": p.q, "variant": variant, "start_index": start, "rows": rows}


def _expr_payload(e: ExtZetaExpr, digits: int | None) -> dict:
    out = e.to_json()
    out["text"] = str(e)
    if digits:
        ctx = nm.NumericContext(precision=digits)
        est = nm.eval_expr(e, ctx)
        out["numeric"] = {"value": mpmath.nstr(est.value, digits), "error": mpmath.nstr(est.error, 3)}
    return out


def compute_derivatives(p: SpectrumParams, variant: str, start: str, digits: int | None) -> dict:
    e = zetabar_prime_expr(p) if variant == CORRECTED else zetabar_prime_printed(p, "thm37ii")
    if start == "q+1":
        lam = eigenvalue(p, p.q)
        e = e + ExtZetaExpr.log(lam, multiplicity(p, p.q))
    return {"n": p.n, "q": p.q, "variant": variant, "start_index": start,
            "zetabar_prime_0": _expr_payload(e, digits)}


def compute_torsion(n: int, digits: int | None) -> dict:
    return {"n": n, "torsion": _expr_payload(torsion_expr(n), digits)}


def compute_oracle(p: SpectrumParams, args) -> dict:
    ctx = nm.NumericContext(precision=args.digits)
    start = _first_index(p, args.start_index)
    if args.at is not None:
        s = ctx.mp.mpf(args.at)
        if s > p.n:
            est = nm.zetabar_direct(p, s, ctx, terms=max(40, 2 * p.n + 4), start=start)
            method = "direct"
        else:
            if start != p.q:
                raise UsageError("--start-index q+1 is only supported by the direct and heat-trace oracles")
            est = nm.claim_n1_eval(p, s, ctx)
            method = "series"
        what = {"at": args.at}
    elif args.deriv0:
        if start != p.q:
            raise UsageError("--start-index q+1 is only supported by the direct and heat-trace oracles")
        est = nm.derivative_at_zero(p, ctx)
        method, what = "central-difference", {"deriv0": True}
    elif args.theta is not None:
        est = nm.theta_coefficient(p, args.theta, ctx, start=start)
        method, what = "heat-trace", {"theta": args.theta}
    else:
        raise UsageError("one of --at, --deriv0, --theta is required")
    return {
        "n": p.n,
        "q": p.q,
        **what,
        "method": method,
        "digits": args.digits,
        "value": mpmath.nstr(est.value, args.digits),
        "error": mpmath.nstr(est.error, 3),
    }


# -- output ------------------------------------------------------------------


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    fields = list(dict.fromkeys(k for r in rows for k in r))
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writeheader()
    for r in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def _flatten(obj, prefix="") -> list[dict]:
    rows = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            rows += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and not isinstance(obj[0], (dict, list)):
        rows.append({"key": prefix, "value": " ".join(str(x) for x in obj)})
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
    else:
        rows.append({"key": prefix, "value": obj})
    return rows


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(payload)
    if fmt == "csv":
        rows = payload.get("rows")
        return _csv(rows if rows is not None else _flatten(payload))
    lines = []
    for r in _flatten(payload):
        lines.append(f"{r['key']}: {r['value']}")
    return "\n".join(lines) + "\n"


# -- argument parsing --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--cache-dir", default=None, help="cache directory (default: $PROJZETA_CACHE)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--digits", type=int, default=60)
    cell = _Parser(add_help=False)
    cell.add_argument("--n", type=int, required=True)
    cell.add_argument("--q", type=int)
    cell.add_argument("--start-index", choices=("q", "q+1"), default="q")

    parser = _Parser(prog="projzeta", description="Spectral zeta functions of Dolbeault Laplacians on P^n.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sp = sub.add_parser("spectrum", parents=[common, cell])
    sp.add_argument("--k-max", type=int, default=10)
    sp = sub.add_parser("genfun", parents=[common, cell])
    sp.add_argument("--order", type=int)
    sp = sub.add_parser("values", parents=[common, cell])
    sp.add_argument("--m-max", type=int, default=3)
    sp.add_argument("--formula-variant", choices=(PRINTED, CORRECTED), default=CORRECTED)
    sp = sub.add_parser("derivatives", parents=[common, cell])
    sp.add_argument("--formula-variant", choices=(PRINTED, CORRECTED), default=CORRECTED)
    sp.add_argument("--numeric", action="store_true", help="add a numeric evaluation at --digits")
    sp = sub.add_parser("torsion", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--numeric", action="store_true")
    sp = sub.add_parser("oracle", parents=[common, cell])
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--at")
    grp.add_argument("--deriv0", action="store_true")
    grp.add_argument("--theta", type=int, metavar="M")
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("--n-max", type=int, default=2)
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--workers", type=int, default=4)
    return parser


def _run(args) -> str:
    if args.digits < 30:
        raise UsageError("--digits must be >= 30")
    cmd = args.command
    if cmd == "verify":
        from .report import build_report

        if args.n_max < 1:
            raise UsageError("--n-max must be >= 1")
        report = build_report(args.n_max, args.digits, args.workers)
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        atomic_write(out / "report.json", dumps(report.to_json()))
        atomic_write(out / "report.md", report.to_markdown())
        summary = {
            "report_json": str(out / "report.json"),
            "report_md": str(out / "report.md"),
            "missing_identities": report.missing(),
            "precision_stable": report.precision_stable(),
            "cells": len(report.cells),
        }
        return render(summary, args.format)
    if cmd == "torsion":
        if args.n < 1:
            raise UsageError("--n must be >= 1")
        key = {"n": args.n, "digits": args.digits if args.numeric else None}
        compute = lambda: dumps(compute_torsion(args.n, args.digits if args.numeric else None))
    else:
        p = _params(args)
        base = {"n": p.n, "q": p.q, "start": args.start_index}
        if cmd == "spectrum":
            if args.k_max < _first_index(p, args.start_index):
                raise UsageError("--k-max is below the first index")
            key = {**base, "k_max": args.k_max}
            compute = lambda: dumps(compute_spectrum(p, args.k_max, args.start_index))
        elif cmd == "genfun":
            key = {**base, "order": args.order}
            compute = lambda: dumps(compute_genfun(p, args.order))
        elif cmd == "values":
            if args.m_max < 0:
                raise UsageError("--m-max must be >= 0")
            key = {**base, "m_max": args.m_max, "variant": args.formula_variant}
            compute = lambda: dumps(compute_values(p, args.m_max, args.formula_variant, args.start_index))
        elif cmd == "derivatives":
            key = {**base, "variant": args.formula_variant, "digits": args.digits if args.numeric else None}
            compute = lambda: dumps(
                compute_derivatives(p, args.formula_variant, args.start_index, args.digits if args.numeric else None)
            )
        elif cmd == "oracle":
            key = {**base, "at": args.at, "deriv0": args.deriv0, "theta": args.theta, "digits": args.digits}
            compute = lambda: dumps(compute_oracle(p, args))
        else:
            raise UsageError(f"unknown command {cmd!r}")
    root = None if args.no_cache else (args.cache_dir or default_cache_dir())
    text = ResultCache(root).load_or_compute(cmd, key, compute)
    if args.format == "json":
        return text
    return render(json.loads(text), args.format)


def run_command(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=err)
        out.write(_run(args))
        return 0
    except UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"projzeta: error: {exc}\n")
        return 2
    except StructuralError as exc:
        err.write(f"projzeta: structural invariant failed: {exc.invariant}\n{exc}\n")
        return 3


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
