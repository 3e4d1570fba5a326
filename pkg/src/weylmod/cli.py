"""weylmod command line.

Exit codes: 0 success or match, 1 verification failure or mismatch,
2 usage or domain error, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from . import characters as ch
from . import coinvariants as co
from . import formulas as fm
from . import parking as pk
from . import verify as vf
from .cache import JsonCache
from .exactnum import GridTooSmall, NotPolynomial, finite_difference_fit
from .partitions import WeightTable, compositions, normalize, pad, transpose

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_ORACLE_BUDGET = 10**6
METHODS = ("formula", "enumerate", "recurrence", "oracle")


class UsageError(ValueError):
    pass


class MethodUnavailable(UsageError):
    pass


@dataclass
class Result:
    data: dict
    header: list[str] = field(default_factory=list)
    rows: list[list[Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    ok: bool = True


# -- argument parsing ------------------------------------------------------------


def int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def int_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            raise ValueError
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}") from None
    if hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo_i, hi_i + 1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, help="number of algebra variables (A = C[x1..xd])")
    common.add_argument("--r", type=int, help="rank of gl_r")
    common.add_argument("--n", type=int, help="highest weight n*omega_1")
    common.add_argument("--xi", type=int_list, help="highest weight as a partition a,b,c")
    common.add_argument("--m", type=int_list, help="capacity vector a,b,c")
    common.add_argument("--l", type=int, help="truncation level / exponent in C[x,y]/x^l")
    common.add_argument("--k", type=int_list, help="content vector (or sl_2 root multiple)")
    common.add_argument("--mu", type=int_list, help="root-lattice offset mu, coefficients of alpha_i")
    common.add_argument("--range", dest="range_", type=int_range, help="sample range lo..hi")
    common.add_argument("--method", default=None, help="comma-separated: " + ",".join(METHODS))
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--cache-dir", help="directory for the result cache")
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    common.add_argument("--multigraded", action="store_true", help="refine oracle dims by multidegree")
    common.add_argument("--budget", type=int, default=None, help="raise the candidate/monomial budget")
    common.add_argument("--algebra", choices=("poly", "double", "xl"), default="poly",
                        help="poly: C[x1..xd]; double: C[x,y]/xy; xl: C[x,y]/x^l")

    parser = argparse.ArgumentParser(prog="weylmod", description="Exact weight multiplicities of Weyl modules for gl_r.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("dims", parents=[common], help="dimension of W^A(xi) by one or more methods")
    sub.add_parser("weights", parents=[common], help="full weight table")
    p = sub.add_parser("char", parents=[common], help="S_n character of parking functions or DH_n(A)")
    p.add_argument("--sign-twist", action="store_true", help="tensor the parking representation with Sign")
    p = sub.add_parser("parking", parents=[common], help="count or list parking functions / subsets")
    p.add_argument("--list", action="store_true", help="stream parking functions, one per line")
    p = sub.add_parser("oracle", parents=[common], help="diagonal coinvariants DH_n(A), graded")
    p.add_argument("--stall", type=int, help="consecutive zero degrees required")
    p.add_argument("--cap", type=int, help="largest degree examined")
    p.add_argument("--timing", action="store_true", help="include wall time (output no longer reproducible)")
    sub.add_parser("polyfit", parents=[common], help="fit multiplicities as polynomials in the highest weight")
    p = sub.add_parser("verify", parents=[common], help="run cross-validation suites")
    p.add_argument("--suite", default="all", choices=vf.SUITES + ("all",))
    return parser


# -- helpers ----------------------------------------------------------------------


def need(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required for this command")
    return value


def algebra_of(args) -> fm.Algebra:
    if args.algebra == "double":
        return fm.Algebra.double_point()
    if args.algebra == "xl":
        return fm.Algebra.xl_line(need(args.l, "--l"))
    d = need(args.d, "--d")
    if d < 0:
        raise UsageError("--d must be >= 0")
    return fm.Algebra.polynomial(d)


def highest_weight(args) -> tuple[int, ...]:
    if args.xi is not None and args.n is not None:
        raise UsageError("give either --n or --xi, not both")
    if args.xi is not None:
        try:
            return normalize(args.xi)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    n = need(args.n, "--n or --xi")
    if n < 0:
        raise UsageError("--n must be >= 0")
    return (n,) if n else ()


def methods_of(args, default: str = "formula") -> list[str]:
    methods = (args.method or default).split(",")
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    return methods


def oracle_cost(algebra: fm.Algebra, n: int) -> int:
    """Rough size of the monomial bookkeeping: monomials in n*d variables up to the classical top degree."""
    nv = n * algebra.nvars
    top = algebra.nvars * n * (n - 1) // 2
    return math.comb(nv + top, top)


def check_oracle_budget(algebra: fm.Algebra, n: int, budget: int | None) -> None:
    limit = DEFAULT_ORACLE_BUDGET if budget is None else budget
    cost = oracle_cost(algebra, n)
    if cost > limit:
        raise pk.BudgetExceeded(
            f"oracle for {algebra}, n={n} is estimated at {cost} monomials (> {limit}); "
            f"rerun with --budget {cost} to proceed"
        )


def oracle_report(algebra: fm.Algebra, n: int, budget: int | None) -> co.GradedReport:
    check_oracle_budget(algebra, n, budget)
    return co.dh_graded(algebra, n, traces=True)


def gaps(xi: Sequence[int], r: int) -> tuple[int, ...]:
    w = pad(xi, r)
    return tuple(w[i] - w[i + 1] for i in range(r - 1)) + (w[-1],)


def weight_table_for(args, method: str, algebra: fm.Algebra, r: int, xi: tuple[int, ...]) -> WeightTable:
    n = sum(xi)
    single_row = len(xi) <= 1
    kind, p = algebra.kind, algebra.param
    if method == "oracle":
        if not single_row:
            raise MethodUnavailable("the coinvariant oracle only covers xi = (n)")
        if n == 0:
            return WeightTable.unit(r)
        return co.weyl_weight_oracle(algebra, r, n, report=oracle_report(algebra, n, args.budget))
    if len(xi) > r:
        raise UsageError(f"xi = {xi} has more than r = {r} parts")
    if kind == "poly":
        if method == "formula":
            if p == 1:
                return ch.c1_weight_table(r, gaps(xi, r))
            if not single_row:
                raise MethodUnavailable(f"no closed formula for general xi at d={p}")
            if p == 0:
                return WeightTable(r, {k: 1 for k in compositions(n, r)})
            if p > 3:
                raise MethodUnavailable("closed formulas exist only for d <= 3")
            return fm.weight_table(p, r, n)
        if p != 2:
            raise MethodUnavailable(f"method {method!r} needs d = 2 (parking-function model)")
        if method == "enumerate":
            return ch.c2_weight_table(r, xi)
        return ch.c2_recurrence(r, xi)
    if kind == "double":
        if method != "formula" or not single_row:
            raise MethodUnavailable("the double point supports --method formula,oracle with xi = (n)")
        return fm.double_point_table(r, n) if n else WeightTable.unit(r)
    if method == "enumerate":
        return ch.cl_weight_table(r, xi, p, "enumerate")
    if method == "recurrence":
        return ch.cl_weight_table(r, xi, p, "recurrence")
    raise MethodUnavailable("C[x,y]/x^l has no closed weight formula; use enumerate, recurrence or oracle")


def verdict_notes(algebra: fm.Algebra, r: int, xi: tuple[int, ...], methods: list[str], agree: bool) -> list[str]:
    notes = []
    n = sum(xi)
    if algebra.kind == "poly" and algebra.param == 3 and "formula" in methods and "oracle" in methods:
        notes.append(f"conjecture {'confirmed' if agree else 'refuted'} at (r={r},n={n})")
    elif algebra.kind == "poly" and algebra.param == 3 and "formula" in methods:
        notes.append("d=3 values are conjectural")
    if algebra.kind == "poly" and algebra.param == 2 and len(xi) > 1:
        notes.append("enumeration tables for general xi are conjecturally equal to W^2(xi)")
    return notes


# -- commands ----------------------------------------------------------------------


def cmd_dims(args, cache: JsonCache) -> Result:
    return _dims_or_weights(args, cache, full=False)


def cmd_weights(args, cache: JsonCache) -> Result:
    return _dims_or_weights(args, cache, full=True)


def _dims_or_weights(args, cache: JsonCache, full: bool) -> Result:
    algebra = algebra_of(args)
    r = need(args.r, "--r")
    if r < 1:
        raise UsageError("--r must be >= 1")
    xi = highest_weight(args)
    methods = methods_of(args, "formula" if not (algebra.kind == "xl") else "enumerate")
    params = {"algebra": algebra.to_json(), "r": r, "xi": list(xi), "methods": methods, "full": full}

    def compute():
        per_method = []
        for method in methods:
            if (not full and method == "formula" and algebra.kind == "poly" and len(xi) <= 1
                    and algebra.param <= 3):
                value = {"method": method, "dim": str(fm.dim_weyl(algebra.param, r, sum(xi)))}
            elif not full and method == "formula" and algebra.kind == "xl" and r == 2 and len(xi) <= 1:
                value = {"method": method, "dim": str(fm.truncated_catalan(algebra.param, sum(xi) + 1))}
            else:
                table = weight_table_for(args, method, algebra, r, xi)
                value = {"method": method, "dim": str(table.total)}
                if full:
                    value["table"] = table.to_json()
            per_method.append(value)
        return per_method

    per_method = cache.fetch("weights" if full else "dims", params, compute)
    keys = [m["table"]["entries"] if full else m["dim"] for m in per_method]
    agree = all(k == keys[0] for k in keys)
    data = {
        "command": "weights" if full else "dims",
        "algebra": algebra.to_json(),
        "r": r,
        "xi": list(xi),
        "conjectural": algebra.kind == "poly" and algebra.param == 3,
        "results": per_method,
    }
    if len(methods) > 1:
        data["verdict"] = "match" if agree else "mismatch"
    notes = verdict_notes(algebra, r, xi, methods, agree)
    if notes:
        data["notes"] = notes

    if full:
        header = [f"k{i + 1}" for i in range(r)] + [m["method"] for m in per_method]
        weights = sorted({tuple(e["k"]) for m in per_method for e in m["table"]["entries"]}, reverse=True)
        lookup = [{tuple(e["k"]): e["dim"] for e in m["table"]["entries"]} for m in per_method]
        rows = [list(k) + [lk.get(k, "0") for lk in lookup] for k in weights]
    else:
        header = ["method", "dim"]
        rows = [[m["method"], m["dim"]] for m in per_method]
    extra = ([f"verdict: {data['verdict']}"] if "verdict" in data else []) + notes
    return Result(data, header, rows, extra, ok=agree)


def cmd_parking(args, cache: JsonCache) -> Result:
    if args.m is not None and args.xi is not None:
        raise UsageError("give either --m or --xi")
    m = args.m if args.m is not None else (transpose(args.xi) if args.xi is not None else None)
    m = pk.capacity(need(m, "--m"))
    budget = pk.DEFAULT_BUDGET if args.budget is None else args.budget
    l = args.l
    if args.list:
        out = sys.stdout
        for f in pk.iter_pf(m, budget=budget, l=l):
            out.write(",".join(map(str, f)) + "\n")
        return Result({"streamed": True})
    if args.k is not None:
        r = need(args.r, "--r")
        count = pk.enumerate_subsets(m, r, args.k, l=l)
        data = {"command": "parking", "m": list(m), "r": r, "k": list(args.k), "l": l, "subsets": str(count)}
        return Result(data, ["m", "r", "k", "subsets"], [[_fmt(m), r, _fmt(args.k), str(count)]])
    methods = methods_of(args, "enumerate")
    counts = []
    for method in methods:
        if method == "enumerate":
            value = pk.enumerate_pf(m, budget=budget, l=l, jobs=args.jobs or os.cpu_count() or 1)
        elif method == "formula":
            if l is not None:
                raise MethodUnavailable("no closed count for the truncated family")
            value = pk.count_pf(m)
        else:
            raise MethodUnavailable("parking supports --method enumerate,formula")
        counts.append({"method": method, "count": str(value)})
    agree = len({c["count"] for c in counts}) == 1
    data = {"command": "parking", "m": list(m), "l": l, "results": counts}
    if len(counts) > 1:
        data["verdict"] = "match" if agree else "mismatch"
    return Result(data, ["method", "count"], [[c["method"], c["count"]] for c in counts],
                  [f"verdict: {data['verdict']}"] if "verdict" in data else [], ok=agree)


def _fmt(seq) -> str:
    return ",".join(map(str, seq))


def _schur_rows(f: ch.SymFuncPS, integral: bool = True) -> list[list[str]]:
    return [[_fmt(lam), str(c)] for lam, c in ch.schur_expand(f, integral).items()]


def cmd_char(args, cache: JsonCache) -> Result:
    if args.m is not None or args.xi is not None:
        m = args.m if args.m is not None else transpose(args.xi)
        budget = pk.DEFAULT_BUDGET if args.budget is None else args.budget
        f = ch.frobenius_char(pk.capacity(m), args.sign_twist, args.l, budget=budget)
        traces = f.traces()
        data = {
            "command": "char",
            "m": list(m),
            "sign_twist": args.sign_twist,
            "l": args.l,
            "traces": [{"cycle_type": list(lam), "trace": str(t)} for lam, t in sorted(traces.items(), reverse=True)],
            "power_sums": f.to_json()["power_sums"],
            "schur": ch.schur_json(f)["schur"],
        }
        return Result(data, ["lambda", "mult"], _schur_rows(f), [f"ch = {f}"])
    algebra = algebra_of(args)
    n = need(args.n, "--n")
    report = oracle_report(algebra, n, args.budget)
    f = ch.SymFuncPS.from_traces(report.traces)
    data = {
        "command": "char",
        "algebra": algebra.to_json(),
        "n": n,
        "traces": [{"cycle_type": list(lam), "trace": str(t)} for lam, t in sorted(report.traces.items(), reverse=True)],
        "schur": ch.schur_json(f)["schur"],
    }
    notes = []
    if algebra.kind == "poly" and algebra.param == 3:
        data["trace_formula_candidate"] = co.trace_formula_report(n, report.traces)
        notes.append("trace_formula_candidate: unverified interpretation (bracket read as an ordinary binomial)")
    return Result(data, ["lambda", "mult"], _schur_rows(f), notes)


def cmd_oracle(args, cache: JsonCache) -> Result:
    algebra = algebra_of(args)
    n = need(args.n, "--n")
    if n < 1:
        raise UsageError("--n must be >= 1")
    method = args.method or "normal-form"
    if method == "direct":
        check_oracle_budget(algebra, n, args.budget)
        top = args.cap if args.cap is not None else algebra.nvars * n * (n - 1) // 2 + 1
        dims = co.dh_graded_dims_direct(algebra, n, top)
        data = {"command": "oracle", "algebra": algebra.to_json(), "n": n, "method": "direct",
                "dims": {str(k): str(v) for k, v in dims.items()}, "total": str(sum(dims.values()))}
        return Result(data, ["degree", "dim"], [[k, v] for k, v in dims.items()])
    if method != "normal-form":
        raise UsageError("oracle supports --method normal-form or direct")
    check_oracle_budget(algebra, n, args.budget)
    try:
        report = co.dh_graded(algebra, n, args.stall, args.cap, traces=True, multigraded=args.multigraded)
    except co.NonConvergence as exc:
        raise pk.BudgetExceeded(f"{exc}; partial dims {exc.partial.dims}") from None
    data = report.to_json()
    if not args.timing:
        data.pop("wall_time_s")
    data = {"command": "oracle", **data}
    notes = []
    if args.r is not None:
        table = co.weyl_weight_oracle(algebra, args.r, n, report=report)
        data["weights"] = table.to_json()
        notes.append("weights: " + ", ".join(f"{_fmt(k)}:{v}" for k, v in table.sorted_items()))
    rows = [[k, v] for k, v in sorted(report.dims.items())]
    notes.append(f"total: {report.total}, converged: {report.converged}")
    return Result(data, ["degree", "dim"], rows, notes)


def _content_of(xi: Sequence[int], mu: Sequence[int], r: int) -> tuple[int, ...]:
    """Weight xi - sum mu_i alpha_i as a content vector."""
    w = list(pad(xi, r))
    for i, c in enumerate(mu):
        w[i] -= c
        w[i + 1] += c
    return tuple(w)


def cmd_polyfit(args, cache: JsonCache) -> Result:
    d = args.d
    l = args.l
    r = args.r or 2
    mu = args.mu if args.mu is not None else args.k
    mu = tuple(need(mu, "--mu (or --k)"))
    if len(mu) != r - 1:
        raise UsageError(f"--mu needs {r - 1} coefficients for gl_{r}")
    grid = need(args.range_, "--range")
    method = args.method or ("formula" if l is None and r == 2 else "enumerate")
    if l is None:
        need(d, "--d")
    nvars = r - 1

    def value(point: tuple[int, ...]) -> int:
        gaps_ = list(point)
        xi = tuple(sum(gaps_[i:]) for i in range(nvars)) + (0,)
        k = _content_of(xi, mu, r)
        if min(k) < 0:
            return 0
        if l is not None:
            return ch.cl_weight_table(r, xi, l)[k]
        if r == 2 and method == "formula":
            return fm.sl2_weight_dim(d, xi[0], mu[0])
        if d == 1:
            return ch.c1_weight_table(r, gaps(xi, r))[k]
        if d == 2:
            return (ch.c2_recurrence if method == "recurrence" else ch.c2_weight_table)(r, xi)[k]
        raise MethodUnavailable(f"no weight data for d={d} beyond sl_2")

    names = ["n"] if nvars == 1 else [f"g{i + 1}" for i in range(nvars)]
    samples = {p: value(p) for p in itertools.product(grid, repeat=nvars)}
    expected = tuple(c if l is not None else (d or 0) * c for c in mu)
    data = {"command": "polyfit", "d": d, "r": r, "mu": list(mu), "l": l, "range": [grid.start, grid.stop - 1],
            "expected_degrees": list(expected)}
    if l is not None:
        lo = min(grid)
        bad = [c for c in mu if not lo > l * c + l]
        if bad:
            data["warning"] = "range does not satisfy the gap constraint xi_i - xi_(i+1) > l*mu_i + l"
    try:
        poly = finite_difference_fit(samples, names)
    except NotPolynomial as exc:
        data.update(finding=str(exc), verdict="not polynomial on this grid")
        return Result(data, [], [], [f"finding: {exc}"], ok=False)
    consistent = poly.degrees == expected
    data.update(polynomial=str(poly), fit=poly.to_json(), degrees=list(poly.degrees),
                verdict="consistent" if consistent else "inconsistent")
    rows = [[v, deg, e] for v, deg, e in zip(names, poly.degrees, expected)]
    return Result(data, ["variable", "degree", "expected"], rows,
                  [f"p = {poly}", f"verdict: {data['verdict']}"], ok=consistent)


def cmd_verify(args, cache: JsonCache) -> Result:
    heavy = args.budget is not None and args.budget >= oracle_cost(fm.Algebra.polynomial(3), 4)
    run = vf.run_suite(args.suite, heavy=heavy)
    data = {"command": "verify", "suite": args.suite, **run.summary()}
    rows = [[c.name, c.scale, "pass" if c.passed else "fail", c.detail] for c in run.checks]
    return Result(data, ["check", "scale", "verdict", "detail"], rows,
                  [f"{'PASS' if run.passed else 'FAIL'}: {len(run.checks)} checks"], ok=run.passed)


COMMANDS = {
    "dims": cmd_dims,
    "weights": cmd_weights,
    "char": cmd_char,
    "parking": cmd_parking,
    "oracle": cmd_oracle,
    "polyfit": cmd_polyfit,
    "verify": cmd_verify,
}


# -- output ------------------------------------------------------------------------


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.data, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if result.header:
            writer.writerow(result.header)
        writer.writerows(result.rows)
        return buf.getvalue()
    lines = []
    if result.header:
        cells = [result.header] + [[str(c) for c in row] for row in result.rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(result.header))]
        for j, row in enumerate(cells):
            lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
            if j == 0:
                lines.append("  ".join("-" * w for w in widths))
    lines.extend(result.notes)
    return "\n".join(lines) + ("\n" if lines else "")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.jobs is not None and args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        cache = JsonCache(args.cache_dir)
        result = COMMANDS[args.command](args, cache)
    except (pk.BudgetExceeded, co.NonConvergence) as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GridTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if result.data.get("streamed"):
        return EXIT_OK
    sys.stdout.write(render(result, args.format))
    return EXIT_OK if result.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
