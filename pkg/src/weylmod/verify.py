"""Cross-validation suites: every check pits two independent routes against each other.

Each suite returns a list of :class:`Check`. Every weight table any check
builds goes through :meth:`Run.table`, which records whether the table is
invariant under all coordinate permutations; each suite ends with a check
summarising that.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import characters as ch
from . import coinvariants as co
from . import formulas as fm
from . import parking as pk
from .exactnum import as_int, binomial, exact_div, finite_difference_fit, multinomial
from .partitions import WeightTable, compositions, pad, partitions_up_to, transpose

SUITES = ("d1", "d2", "d3", "singular", "parking", "identity", "polynomiality")


@dataclass
class Check:
    name: str
    scale: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "scale": self.scale,
            "verdict": "pass" if self.passed else "fail",
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class Run:
    heavy: bool = False
    checks: list[Check] = field(default_factory=list)
    tables_seen: int = 0
    asymmetric: list[str] = field(default_factory=list)

    def table(self, table: WeightTable, label: str) -> WeightTable:
        self.tables_seen += 1
        if not table.is_weyl_symmetric():
            self.asymmetric.append(label)
        return table

    def check(self, name: str, scale: str, body: Callable[[], str | None]) -> Check:
        """Run ``body``; it returns None on success or a description of the first failure."""
        start = time.perf_counter()
        try:
            failure = body()
        except (ArithmeticError, ValueError, AssertionError, RuntimeError) as exc:
            failure = f"{type(exc).__name__}: {exc}"
        result = Check(name, scale, failure is None, failure or "", time.perf_counter() - start)
        self.checks.append(result)
        return result

    def symmetry_check(self) -> Check:
        def body():
            if self.asymmetric:
                return f"not permutation invariant: {', '.join(self.asymmetric[:5])}"
            return None

        return self.check("weyl-symmetry", f"{self.tables_seen} tables", body)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        return {
            "passed": self.passed,
            "total": len(self.checks),
            "failures": sum(not c.passed for c in self.checks),
            "checks": [c.to_json() for c in self.checks],
        }


def _first(items: Iterable[tuple[bool, str]]) -> str | None:
    for ok, where in items:
        if not ok:
            return where
    return None


def fit_degree(samples: dict) -> tuple[int, ...]:
    return finite_difference_fit(samples).degrees


# -- individual checks, shared with the acceptance tests ---------------------------


def fuss_narayana(run: Run, ranks=(2, 3, 4), max_n: int = 7) -> Check:
    def body():
        for r, n in itertools.product(ranks, range(1, max_n + 1)):
            table = run.table(pk.subset_table((1,) * n, r), f"subsets r={r} n={n}")
            for k in compositions(n, r):
                expected = exact_div(math.prod(binomial(n + 1, x) for x in k), n + 1)
                if table[k] != expected:
                    return f"r={r} n={n} k={k}: {table[k]} != {expected}"
            if table.total != exact_div(binomial(r * (n + 1), n), n + 1):
                return f"r={r} n={n}: total {table.total}"
        return None

    return run.check("fuss-narayana", f"r in {ranks}, n <= {max_n}", body)


def oeis_prefixes(run: Run, max_n: int = 10) -> Check:
    def body():
        cat = fm.load_oeis("A000108")
        hyper = fm.load_oeis("A000139")
        return _first(
            [(fm.dim_weyl(2, 2, n) == cat[n + 1], f"d=2 n={n}") for n in range(max_n + 1)]
            + [(fm.dim_weyl(3, 2, n) == hyper[n + 1], f"d=3 n={n}") for n in range(max_n + 1)]
        )

    return run.check("oeis-prefixes", f"n <= {max_n}", body)


def d1_multinomials(run: Run, max_r: int = 4, max_n: int = 8) -> Check:
    def body():
        for r, n in itertools.product(range(1, max_r + 1), range(max_n + 1)):
            table = run.table(ch.c1_weight_table(r, (n,)), f"c1 r={r} n={n}")
            for k in compositions(n, r):
                if table[k] != multinomial(k):
                    return f"r={r} n={n} k={k}"
            if table.total != fm.dim_weyl(1, r, n):
                return f"total r={r} n={n}"
        return None

    return run.check("d1-multinomials", f"r <= {max_r}, n <= {max_n}", body)


def sl2_degree(run: Run, d: int, k: int, ns: range) -> Check:
    def body():
        samples = {n: fm.sl2_weight_dim(d, n, k) for n in ns}
        deg = fit_degree(samples)[0]
        return None if deg == d * k else f"detected degree {deg}, expected {d * k}"

    return run.check(f"polyfit-d{d}-k{k}", f"n = {ns.start}..{ns.stop - 1}", body)


def recurrence_i(run: Run, max_size: int = 6, max_r: int = 3) -> Check:
    def body():
        ch.clear_cache()
        for r in range(1, max_r + 1):
            for xi in partitions_up_to(max_size):
                if not xi:
                    continue
                a = run.table(ch.c2_recurrence(r, xi), f"rec r={r} xi={xi}")
                b = run.table(ch.c2_weight_table(r, xi), f"enum r={r} xi={xi}")
                if a != b:
                    return f"r={r} xi={xi}: {a.difference(b)}"
        return None

    return run.check("recurrence-i", f"|xi| <= {max_size}, r <= {max_r}", body)


def admissible_rec_ii(max_size: int, max_r: int):
    for r in range(2, max_r + 1):
        for xi in partitions_up_to(max_size):
            if not xi or len(xi) > r:
                continue
            w = pad(xi, r)
            for k in range(1, r):
                if w[k - 1] - w[k] > 1:
                    yield r, xi, k


def recurrence_ii(run: Run, max_size: int = 6, max_r: int = 3) -> Check:
    def body():
        count = 0
        for r, xi, k in admissible_rec_ii(max_size, max_r):
            count += 1
            residual = ch.rec_ii_residual(r, xi, k)
            if residual:
                return f"r={r} xi={xi} k={k}: {residual}"
        return None if count else "no admissible cases"

    return run.check("recurrence-ii", f"|xi| <= {max_size}, r <= {max_r}", body)


def d2_three_routes(run: Run, max_n: int = 7, max_r: int = 4) -> Check:
    def body():
        ch.clear_cache()
        for r, n in itertools.product(range(1, max_r + 1), range(1, max_n + 1)):
            formula = run.table(fm.weight_table(2, r, n), f"d2 formula r={r} n={n}")
            enum = run.table(ch.c2_weight_table(r, (n,)), f"d2 enum r={r} n={n}")
            rec = run.table(ch.c2_recurrence(r, (n,)), f"d2 rec r={r} n={n}")
            if not formula == enum == rec:
                return f"r={r} n={n}"
        return None

    return run.check("d2-formula-enumeration-recurrence", f"n <= {max_n}, r <= {max_r}", body)


def parking_traces(run: Run, max_size: int = 5, max_r: int = 3) -> Check:
    def body():
        for r in range(1, max_r + 1):
            for xi in partitions_up_to(max_size):
                if not xi or len(xi) > r:
                    continue
                traces = ch.parking_traces(transpose(xi), sign_twist=True)
                got = run.table(ch.weight_table_from_traces(traces, r), f"traces r={r} xi={xi}")
                if got != ch.c2_weight_table(r, xi):
                    return f"r={r} xi={xi}"
        return None

    return run.check("schur-weyl-of-parking-traces", f"|xi| <= {max_size}, r <= {max_r}", body)


def oracle_check(run: Run, algebra: fm.Algebra, ns: Iterable[int], ranks: Iterable[int],
                 expected_total: Callable[[int], int] | None,
                 expected_table: Callable[[int, int], WeightTable], label: str) -> Check:
    ns, ranks = list(ns), list(ranks)

    def body():
        for n in ns:
            report = co.dh_graded(algebra, n)
            if not report.converged or report.dims[0] != 1:
                return f"n={n}: bad report"
            if report.traces[(1,) * n] != report.total:
                return f"n={n}: identity trace {report.traces[(1,) * n]} != total {report.total}"
            if expected_total is not None and report.total != expected_total(n):
                return f"n={n}: total {report.total} != {expected_total(n)}"
            for r in ranks:
                got = run.table(co.weyl_weight_oracle(algebra, r, n, report=report), f"oracle {algebra} r={r} n={n}")
                want = run.table(expected_table(r, n), f"model {algebra} r={r} n={n}")
                if got != want:
                    return f"n={n} r={r}: {got.difference(want)}"
        return None

    return run.check(label, f"{algebra}, n in {ns}, r in {ranks}", body)


def truncated_catalan_check(run: Run, max_l: int = 3, max_n: int = 7) -> Check:
    def body():
        for l, n in itertools.product(range(1, max_l + 1), range(1, max_n + 1)):
            table = run.table(ch.cl_weight_table(2, (n - 1,), l), f"cl l={l} xi=({n - 1})")
            if fm.truncated_catalan(l, n) != table.total:
                return f"l={l} n={n}: {fm.truncated_catalan(l, n)} != {table.total}"
            if n <= l + 1 and fm.truncated_catalan(l, n) != fm.catalan(n):
                return f"seed l={l} n={n}"
        return None

    return run.check("truncated-catalan", f"l <= {max_l}, n <= {max_n}", body)


def truncated_recurrence(run: Run, max_l: int = 3, max_size: int = 6, max_r: int = 3) -> Check:
    def body():
        for l, r in itertools.product(range(1, max_l + 1), range(1, max_r + 1)):
            for xi in partitions_up_to(max_size):
                a = run.table(ch.cl_weight_table(r, xi, l, "enumerate"), f"cl enum r={r} xi={xi}")
                b = run.table(ch.cl_weight_table(r, xi, l, "recurrence"), f"cl rec r={r} xi={xi}")
                if a != b:
                    return f"l={l} r={r} xi={xi}"
        for n in range(7):
            if ch.cl_weight_table(2, (n,), 1) != ch.c1_weight_table(2, (n,)):
                return f"l=1 degeneration n={n}"
        return None

    return run.check("truncated-recurrence", f"l <= {max_l}, |xi| <= {max_size}, r <= {max_r}", body)


SUPPORTED_ALGEBRAS = (
    fm.Algebra.polynomial(0),
    fm.Algebra.polynomial(1),
    fm.Algebra.polynomial(2),
    fm.Algebra.polynomial(3),
    fm.Algebra.double_point(),
    fm.Algebra.xl_line(1),
    fm.Algebra.xl_line(2),
    fm.Algebra.xl_line(3),
)


def hilbert_check(run: Run, max_n: int = 4) -> Check:
    def body():
        for algebra in SUPPORTED_ALGEBRAS:
            for n in range(2, max_n + 1):
                if algebra.nvars == 3 and n > 3:
                    continue
                table = run.table(co.weyl_weight_oracle(algebra, 2, n), f"hilbert {algebra} n={n}")
                if table[(n - 1, 1)] != fm.hilbert_nbhd(algebra, n):
                    return f"{algebra} n={n}: {table[(n - 1, 1)]} != {fm.hilbert_nbhd(algebra, n)}"
        return None

    return run.check("hilbert-neighbourhood", f"all presentations, n <= {max_n}", body)


def simulation_agreement(run: Run, max_size: int = 6, max_lots: int = 4) -> Check:
    def body():
        for n_lots in range(1, max_lots + 1):
            for size in range(max_size + 1):
                for m in compositions(size, n_lots):
                    for f in itertools.product(range(1, n_lots + 2), repeat=size):
                        a = pk.is_parking(f, m, "inequality")
                        b = pk.is_parking(f, m, "simulate")
                        if a != b:
                            return f"m={m} f={f}"
        return None

    return run.check("simulation-vs-inequality", f"|m| <= {max_size}, N <= {max_lots}", body)


def cycle_lemma(run: Run, max_n: int = 6) -> Check:
    def body():
        for n in range(1, max_n + 1):
            count = 0
            for f in itertools.product(range(1, n + 2), repeat=n):
                good = [k for k in range(1, n + 2) if pk.is_parking(pk.cyclic_shift(f, k), (1,) * n)]
                if good != [pk.cycle_shift_index(f)]:
                    return f"f={f}: parking shifts {good}"
                count += pk.is_parking(f, (1,) * n)
            if count != (n + 1) ** (n - 1):
                return f"n={n}: {count} parking functions"
        return None

    return run.check("cycle-lemma", f"n <= {max_n}, all (n+1)^n functions", body)


def product_forms(run: Run, max_n: int = 12, max_k: int = 5) -> Check:
    def body():
        for d, n in itertools.product((1, 2, 3), range(max_n + 1)):
            for k in range(min(n, max_k) + 1):
                pn, pk_ = fm.product_form(d, n, k)
                if Fraction(pn, pk_) != fm.sl2_weight_dim(d, n, k):
                    return f"d={d} n={n} k={k}"
        for n in range(11):
            if [fm.weight_dim(2, 2, n, (n - k, k)) for k in range(n + 1)] != [
                fm.sl2_weight_dim(2, n, k) for k in range(n + 1)
            ]:
                return f"narayana n={n}"
        return None

    return run.check("product-forms", f"d in 1..3, n <= {max_n}, k <= {max_k}", body)


def weight_sums(run: Run, max_r: int = 4, max_n: int = 8) -> Check:
    def body():
        for d, r, n in itertools.product((1, 2, 3), range(1, max_r + 1), range(max_n + 1)):
            table = run.table(fm.weight_table(d, r, n), f"formula d={d} r={r} n={n}")
            if table.total != fm.dim_weyl(d, r, n):
                return f"d={d} r={r} n={n}"
        return None

    return run.check("weight-sums", f"d in 1..3, r <= {max_r}, n <= {max_n}", body)


def pol2_degree(run: Run, max_k: int = 3) -> list[Check]:
    return [sl2_degree(run, 2, k, range(1, 2 * k + 5)) for k in range(max_k + 1)]


def truncated_degree(run: Run, l: int = 2, mu: int = 1, points: int = 6) -> Check:
    lo = l * mu + l + 1

    def body():
        samples = {g: ch.cl_weight_table(2, (g,), l)[(g - mu, mu)] for g in range(lo, lo + points)}
        deg = fit_degree(samples)[0]
        return None if deg == mu else f"detected degree {deg}, expected {mu}"

    return run.check(f"polyfit-truncated-l{l}-mu{mu}", f"gap = {lo}..{lo + points - 1}", body)


# -- suites -----------------------------------------------------------------------


def suite_d1(run: Run) -> None:
    d1_multinomials(run)
    for k in range(5):
        sl2_degree(run, 1, k, range(0, k + 5))
    oracle_check(run, fm.Algebra.polynomial(1), range(1, 5), range(1, 4), math.factorial,
                 lambda r, n: ch.c1_weight_table(r, (n,)), "oracle-d1")


def suite_d2(run: Run) -> None:
    fuss_narayana(run)
    oeis_prefixes(run)
    d2_three_routes(run)
    recurrence_i(run)
    recurrence_ii(run)
    parking_traces(run)
    oracle_check(run, fm.Algebra.polynomial(2), range(1, 5), range(1, 4), lambda n: (n + 1) ** (n - 1),
                 lambda r, n: ch.c2_weight_table(r, (n,)), "oracle-d2")


def d3_total(n: int) -> int:
    """2^n (n+1)^(n-2), the conjectured dim DH_n(C[x,y,z])."""
    return as_int(Fraction(2) ** n * Fraction(n + 1) ** (n - 2))


def suite_d3(run: Run) -> None:
    ns = range(1, 5) if run.heavy else range(1, 4)
    oracle_check(run, fm.Algebra.polynomial(3), ns, range(1, 4), d3_total,
                 lambda r, n: fm.weight_table(3, r, n), "oracle-d3-conjecture")


def suite_singular(run: Run) -> None:
    # dim of a S_n-representation is its (1,...,1) weight multiplicity once r >= n
    oracle_check(run, fm.Algebra.double_point(), range(1, 6), range(1, 4),
                 lambda n: fm.double_point_table(n, n)[(1,) * n], fm.double_point_table, "oracle-double-point")
    for l in (1, 2):
        oracle_check(run, fm.Algebra.xl_line(l), range(1, 5), (2,), None,
                     lambda r, n, l=l: ch.cl_weight_table(r, (n,), l), f"oracle-xl-line-{l}")
    truncated_catalan_check(run)
    truncated_recurrence(run)
    hilbert_check(run)


def suite_parking(run: Run) -> None:
    simulation_agreement(run)
    cycle_lemma(run)

    def counts():
        return _first(
            (pk.enumerate_pf((1,) * n) == (n + 1) ** (n - 1) == pk.count_pf((1,) * n) == pk.perm_trace((1,) * n, (1,) * n),
             f"n={n}")
            for n in range(1, 7)
        )

    run.check("parking-counts", "n <= 6", counts)


def suite_identity(run: Run) -> None:
    product_forms(run)
    weight_sums(run)


def suite_polynomiality(run: Run) -> None:
    pol2_degree(run)
    truncated_degree(run)


_SUITE_FUNCS = {
    "d1": suite_d1,
    "d2": suite_d2,
    "d3": suite_d3,
    "singular": suite_singular,
    "parking": suite_parking,
    "identity": suite_identity,
    "polynomiality": suite_polynomiality,
}


def run_suite(name: str, heavy: bool = False) -> Run:
    if name != "all" and name not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    run = Run(heavy=heavy)
    for key in SUITES if name == "all" else (name,):
        _SUITE_FUNCS[key](run)
    run.symmetry_check()
    return run


__all__ = ["Check", "Run", "SUITES", "run_suite"]
