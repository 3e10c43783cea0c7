"""Command-line entry point: ``qsp <subcommand> [flags]``.

Every run prints a JSON envelope ``{tool_version, config, results, timing}``
unless ``--format csv`` or ``--format text`` asks for a table.  Exit codes:
0 success, 2 verification failure, 3 cap exceeded, 4 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from math import log
from typing import Any, Callable, Sequence

from . import __version__
from .algebra import FpPoly, format_poly, parse_poly
from .ecdlp import DEFAULT_C, complexity_estimate, exponent_table, generic_threshold, optimal_m, run_demo
from .errors import CapExceededError, QspError, UsageError, VerificationError
from .families import (
    gen_mult,
    gen_type1,
    gen_type1bis,
    gen_type2,
    gen_type3,
    heuristic_density,
    mersenne_divisor_table,
    mersenne_sparse_enumerate,
    mult_root_count,
    sparsity,
)
from .qsp import (
    beta_of,
    distinct_roots_in_extension,
    lemma_mc_check,
    linearize,
    low_bound_check,
    root_count_with_route,
    search_representatives,
    split_test_companion,
    split_test_div,
    theorem_beta_bound,
)
from .symbolic import bound_report

EXIT_OK, EXIT_VERIFY, EXIT_CAP, EXIT_USAGE = 0, 2, 3, 4
DEFAULT_SEARCH_CAP = 1 << 24

# p -> (largest n', coefficient set) for the table reproduction scope.
TABLE_B1_SCOPE: dict[int, tuple[int, tuple[int, ...]]] = {
    2: (16, (0, 1)),
    3: (10, (0, 1, -1)),
    5: (8, (0, 1, -1)),
    7: (8, (0, 1, -1)),
}
TABLE_COLUMNS = ["f", "n", "beta", "p", "T1", "T2", "T3"]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _coeff_set(text: str | None) -> tuple[int, ...] | None:
    if text is None or text == "all":
        return None
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise UsageError(f"bad coefficient set {text!r}") from exc
    if not any(values):
        raise UsageError("coefficient set must contain a nonzero value")
    return values


def _search_size(p: int, n_prime_max: int, coeffs: tuple[int, ...] | None, n_prime_min: int = 2) -> int:
    values = {c % p for c in coeffs} if coeffs is not None else set(range(p))
    nonzero = len(values - {0})
    return sum(nonzero * len(values) ** (m - 1) for m in range(max(n_prime_min, 2), n_prime_max + 1))


# ---------------------------------------------------------------- subcommands


def cmd_verify(args: argparse.Namespace) -> dict[str, Any]:
    p, n = args.p, args.n
    if args.mult:
        if args.a is None or args.nprime is None:
            raise UsageError("--mult needs --a and --nprime")
        coeffs = [0] * (p**args.nprime + 1)
        coeffs[-1] = 1
        coeffs[args.a] = (coeffs[args.a] - 1) % p
        poly = FpPoly(p, coeffs)
        roots = distinct_roots_in_extension(poly, n)
        return {
            "kind": "multiplicative",
            "polynomial": format_poly(poly),
            "splits": roots == p**args.nprime,
            "root_count": roots,
            "root_ratio": roots / p**args.nprime,
            "beta": n * log(args.a) / (args.nprime**2 * log(p)),
        }
    if args.f is None:
        raise UsageError("verify needs --f or --mult")
    f = parse_poly(args.f, p)
    q = linearize(f, n)
    by_division = split_test_div(f, n)
    by_companion = split_test_companion(q) == p**q.n_prime
    roots, route = root_count_with_route(q)
    if not by_division == by_companion == (roots == p**q.n_prime):
        raise VerificationError(
            f"split tests disagree: division={by_division}, companion={by_companion}, roots={roots}"
        )
    out: dict[str, Any] = {
        "kind": "linearized",
        "f": format_poly(f),
        "L": str(q),
        "n_prime": q.n_prime,
        "ell": q.ell,
        "splits": by_division,
        "root_count": roots,
        "root_route": route,
    }
    if q.ell >= 1:
        beta = q.beta()
        out.update(
            beta=f"{beta.numerator}/{beta.denominator}",
            beta_float=float(beta),
            lemma_mc=lemma_mc_check(n, q.n_prime, q.ell),
            low_bound=low_bound_check(n, q.n_prime, q.ell),
            beta_floor=theorem_beta_bound(n, q.n_prime, q.ell),
        )
    return out


def _records_json(records) -> list[dict[str, Any]]:
    out = []
    for r in records:
        row = r.to_json()
        row["f_text"] = format_poly(r.f)
        row["beta"] = float(r.beta)
        out.append(row)
    return out


def cmd_search(args: argparse.Namespace) -> dict[str, Any]:
    coeffs = _coeff_set(args.coeffs)
    size = _search_size(args.p, args.nprime_max, coeffs, args.nprime_min)
    if size > args.cap:
        raise CapExceededError(f"search would scan {size} polynomials, above --cap {args.cap}")
    records = search_representatives(
        args.p, args.nprime_max, coeffs, Fraction(args.beta_max),
        n_prime_min=args.nprime_min, workers=args.workers,
    )
    return {"count": len(records), "records": _records_json(records), "rows": [r.csv_row() for r in records]}


def cmd_table_b1(args: argparse.Namespace) -> dict[str, Any]:
    primes = args.primes or sorted(TABLE_B1_SCOPE)
    rows = []
    for p in primes:
        if p not in TABLE_B1_SCOPE:
            raise UsageError(f"no default scope for p={p}; use `search` instead")
        n_prime_max, coeffs = TABLE_B1_SCOPE[p]
        if args.coeffs is not None:
            coeffs = _coeff_set(args.coeffs)
        for rec in search_representatives(p, n_prime_max, coeffs, workers=args.workers):
            rows.append(rec.csv_row())
    return {"count": len(rows), "rows": rows}


def cmd_families(args: argparse.Namespace) -> dict[str, Any]:
    kind = args.type

    def need(*names: str) -> list[int]:
        missing = [nm for nm in names if getattr(args, nm) is None]
        if missing:
            raise UsageError(f"--type {kind} needs " + ", ".join("--" + nm for nm in missing))
        return [getattr(args, nm) for nm in names]

    if kind in ("m1", "m2", "m3"):
        if kind == "m1":
            p, i, k = need("p", "i", "k")
            m = gen_mult(1, p=p, i=i, k=k)
        else:
            k, n = need("k", "n")
            m = gen_mult(int(kind[1]), k=k, n=n)
        out = m.to_json()
        out["polynomial"] = f"X^{m.p ** m.n_prime}-X^{m.a}"
        if m.p**m.n_prime <= 1 << 14:
            out["root_count_gcd"] = mult_root_count(m)
        return out
    if kind == "t1":
        p, r, a = need("p", "r", "a")
        member = gen_type1(p, r, a)
    elif kind == "t1bis":
        p, n = need("p", "n")
        member = gen_type1bis(p, n)
    elif kind in ("t2", "t3"):
        if kind == "t3" and args.of == "t1":
            p, r, a = need("p", "r", "a")
            member = gen_type3(gen_type1(p, r, a))
        else:
            p, r, d, a = need("p", "r", "d", "a")
            member = gen_type2(p, r, d, a)
            if kind == "t3":
                member = gen_type3(member)
    else:
        raise UsageError(f"unknown family {kind}")
    out = member.to_json()
    out["f_text"] = format_poly(member.f)
    out["beta"] = float(member.beta)
    return out


def cmd_bound(args: argparse.Namespace) -> dict[str, Any]:
    report = bound_report(args.nprime, args.ell, args.n_max)
    if report["symbolic_bound"] != "PASS" or report["chen_louck_oracle"] != "PASS":
        raise VerificationError(json.dumps(report))
    return report


def cmd_mersenne(args: argparse.Namespace) -> dict[str, Any]:
    k = args.k
    n = 2**k - 1
    found = mersenne_sparse_enumerate(k, args.ell_max, args.nprime)
    rows = []
    for f in found:
        count, exists = heuristic_density(n, f.degree, k, sparsity(f))
        rows.append({
            "f": format_poly(f),
            "n_prime": f.degree,
            "ell": sparsity(f),
            "beta": float(beta_of(n, f.degree, sparsity(f))),
            "heuristic_count": count,
            "heuristic_exists": exists,
        })
    table = mersenne_divisor_table(k)
    return {"n": n, "divisor_counts": {str(d): c for d, c in table.items() if c}, "count": len(rows), "rows": rows}


def cmd_estimate(args: argparse.Namespace) -> dict[str, Any]:
    if args.table:
        rows = exponent_table(c=args.c)
        return {"c": args.c, "generic_threshold": generic_threshold(args.c), "rows": rows}
    if args.beta is None:
        raise UsageError("estimate needs --beta or --table")
    if args.optimal:
        m, e = optimal_m(args.beta, args.c)
        est = complexity_estimate(args.beta, args.c, m).to_json()
        est["optimal_m"] = m
        alpha = est["alpha"]
        if alpha < 2:
            est["asymptote"] = 1 - alpha / 2
        return est
    return complexity_estimate(args.beta, args.c, args.m).to_json()


def cmd_ecdlp_demo(args: argparse.Namespace) -> dict[str, Any]:
    f = parse_poly(args.f, args.p) if args.f else None
    if args.mode == "semaev" and args.m != 2:
        raise UsageError("semaev mode needs --m 2; use --mode direct for larger m")
    report = run_demo(
        p=args.p, n=args.n, f=f, seed=args.seed, m=args.m, mode=args.mode,
        instances=args.instances, trials_cap=args.trials_cap,
    )
    out = report.to_json()
    if report.agreement != len(report.instances):
        raise VerificationError(json.dumps(out))
    return out


# ---------------------------------------------------------------- parser and output


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="qsp", description="Quasi-subfield polynomial toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(handler=fn)
        return sp

    sp = add("verify", cmd_verify, "test one polynomial for complete splitting")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--f", help="f such that L_f is tested, e.g. 'X^3+X+1'")
    sp.add_argument("--mult", action="store_true", help="test X^{p^n'} - X^a instead")
    sp.add_argument("--a", type=int)
    sp.add_argument("--nprime", type=int)

    sp = add("search", cmd_search, "enumerate splitting linearized QSPs")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--nprime-max", type=int, required=True)
    sp.add_argument("--nprime-min", type=int, default=2)
    sp.add_argument("--coeffs", default="0,1,-1", help="comma list, or 'all'")
    sp.add_argument("--beta-max", default="1")
    sp.add_argument("--cap", type=int, default=DEFAULT_SEARCH_CAP)

    sp = add("table-b1", cmd_table_b1, "classification table rows over the default scope")
    sp.add_argument("--primes", type=int, nargs="*")
    sp.add_argument("--coeffs", default=None)

    sp = add("families", cmd_families, "generate a family member")
    sp.add_argument("--type", required=True, choices=("t1", "t1bis", "t2", "t3", "m1", "m2", "m3"))
    sp.add_argument("--of", choices=("t1", "t2"), default="t2", help="base family for t3")
    for flag in ("p", "r", "a", "d", "n", "i", "k"):
        sp.add_argument(f"--{flag}", type=int)

    sp = add("bound", cmd_bound, "symbolic lower bound on n with Chen-Louck cross-check")
    sp.add_argument("--nprime", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--n-max", type=int)

    sp = add("mersenne", cmd_mersenne, "sparse divisors of X^(2^k-1)-1 over F_2")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--ell-max", type=int, required=True)
    sp.add_argument("--nprime", type=int)

    sp = add("estimate", cmd_estimate, "complexity exponent of the index-calculus attack")
    sp.add_argument("--beta", type=float)
    sp.add_argument("--c", type=float, default=DEFAULT_C)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--m", type=int)
    group.add_argument("--optimal", action="store_true")
    sp.add_argument("--table", action="store_true")

    sp = add("ecdlp-demo", cmd_ecdlp_demo, "index calculus on a small prime-order curve")
    sp.add_argument("--p", type=int, default=5)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--f", default=None, help="QSP polynomial f (default X^2+X+1)")
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--mode", choices=("semaev", "direct"), default="semaev")
    sp.add_argument("--instances", type=int, default=20)
    sp.add_argument("--trials-cap", type=int, default=100_000)
    return parser


def _config(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k != "handler"}


def _render_csv(results: dict[str, Any]) -> str:
    buf = io.StringIO()
    rows = results.get("rows")
    if isinstance(rows, list):
        cols = list(rows[0]) if rows else TABLE_COLUMNS
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in results.items():
            writer.writerow([key, value if not isinstance(value, (dict, list)) else json.dumps(value)])
    return buf.getvalue()


def _render_text(results: dict[str, Any]) -> str:
    rows = results.get("rows")
    if isinstance(rows, list) and rows:
        cols = list(rows[0])
        widths = [max(len(c), *(len(str(r[c])) for r in rows)) for c in cols]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        lines += ["  ".join(str(r[c]).ljust(w) for c, w in zip(cols, widths)) for r in rows]
        return "\n".join(lines) + "\n"
    return "".join(f"{k}: {v}\n" for k, v in results.items() if k != "rows")


def main(argv: Sequence[str] | None = None) -> int:
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        results = args.handler(args)
    except QspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.format == "csv":
        sys.stdout.write(_render_csv(results))
    elif args.format == "text":
        sys.stdout.write(_render_text(results))
    else:
        envelope = {
            "tool_version": __version__,
            "config": _config(args),
            "results": results,
            "timing": {"seconds": round(time.perf_counter() - started, 6)},
        }
        json.dump(envelope, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
