"""Diagonal coinvariants DH_n(A) = A^{(x)n} / (positive-degree invariants), exactly.

The quotient is graded by multidegree delta in Z^d (exponent of each algebra
variable, summed over the n tensor slots); the ideal is generated by the
polarized power sums p_m = sum_i iota_i(m), m a monomial of positive degree
in A, so it is homogeneous for this grading.

Default engine ("normal-form"). Work degree by degree and keep, for every
block delta, a basis B_delta of standard monomials together with the normal
form NF(w) of every monomial w of that degree. Since each monomial of positive
degree is divisible by some slot variable x_v, the quotient Q_delta is
spanned by S_delta = {x_v u : u in B_{delta - e_v}, x_v u != 0}, and
Q_delta = k^{S_delta} / K where K is spanned by

* x_v NF(w) - E(x_v w) for every monomial w of degree delta - e_v, with E(M)
  the fixed representative x_v0 NF(M / x_v0), v0 the first variable of M
  (and E(x_v w) = 0 when x_v w vanishes in A);
* sum_i E(iota_i(m) u) for m a positive-degree monomial and u in B_{delta-deg m}.

Both families lie in the ideal, and together they carry every element of
I_delta = sum_v x_v I_{delta - e_v} + sum_m p_m (A^{(x)n})_{delta - deg m},
since p_m times an ideal element is already a multiple of a variable times that
element. Once a whole total degree vanishes every higher one does too.

A second engine ("direct") does what the definition says: ambient monomials
minus the fraction-free rank of {p_m * monomial}. It is only practical on
small inputs and serves as a cross-check.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from .characters import weight_table_from_traces
from .formulas import Algebra
from .linalg import Echelon, add_scaled, rank_fraction_free
from .partitions import WeightTable, compositions, cycle_sign, partitions, permutation_of

Monomial = tuple[int, ...]  # flattened slot-major exponents, length n * nvars
Degree = tuple[int, ...]


class NonConvergence(RuntimeError):
    """Hit the degree cap before observing ``stall`` consecutive zero degrees."""

    def __init__(self, message: str, partial: "GradedReport"):
        super().__init__(message)
        self.partial = partial


def default_stall(algebra: Algebra, n: int) -> int:
    return max(1, n * algebra.nvars)


def default_cap(algebra: Algebra, n: int) -> int:
    return algebra.nvars * n * (n - 1) // 2 + default_stall(algebra, n) + 4


@dataclass
class GradedReport:
    algebra: Algebra
    n: int
    dims: dict[int, int] = field(default_factory=dict)
    converged: bool = False
    traces: dict[tuple[int, ...], int] | None = None
    graded_traces: dict[int, dict[tuple[int, ...], int]] | None = None
    multidims: dict[Degree, int] | None = None
    stats: list[dict] = field(default_factory=list)
    seconds: float = 0.0
    method: str = "normal-form"

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    @property
    def top_degree(self) -> int:
        return max((d for d, v in self.dims.items() if v), default=0)

    def to_json(self) -> dict:
        out = {
            "algebra": self.algebra.to_json(),
            "n": self.n,
            "method": self.method,
            "dims": {str(d): str(v) for d, v in sorted(self.dims.items())},
            "total": str(self.total),
            "converged": self.converged,
            "wall_time_s": round(self.seconds, 3),
            "stats": self.stats,
        }
        if self.traces is not None:
            out["traces"] = [
                {"cycle_type": list(lam), "trace": str(t)} for lam, t in sorted(self.traces.items(), reverse=True)
            ]
        if self.multidims is not None:
            out["multidims"] = [
                {"degree": list(delta), "dim": str(v)} for delta, v in sorted(self.multidims.items())
            ]
        return out


class _Ring:
    """Monomial bookkeeping for A^{(x)n}."""

    def __init__(self, algebra: Algebra, n: int):
        self.algebra = algebra
        self.n = n
        self.d = algebra.nvars
        self.size = n * self.d

    def var_of(self, v: int) -> int:
        return v % self.d

    def nonzero(self, mono: Monomial) -> bool:
        d = self.d
        return all(self.algebra.allows(mono[i * d:(i + 1) * d]) for i in range(self.n))

    def times(self, mono: Monomial, v: int) -> Monomial | None:
        out = list(mono)
        out[v] += 1
        out = tuple(out)
        slot = v // self.d
        return out if self.algebra.allows(out[slot * self.d:(slot + 1) * self.d]) else None

    def monomials(self, delta: Degree) -> Iterator[Monomial]:
        """Nonzero monomials of multidegree delta."""
        n, d = self.n, self.d
        per_var = [list(compositions(delta[a], n)) for a in range(d)]
        for choice in itertools.product(*per_var):
            mono = tuple(choice[a][i] for i in range(n) for a in range(d))
            if self.nonzero(mono):
                yield mono

    def first_var(self, mono: Monomial) -> int:
        for v, e in enumerate(mono):
            if e:
                return v
        raise ValueError("constant monomial has no variable")

    def divide(self, mono: Monomial, v: int) -> Monomial:
        out = list(mono)
        out[v] -= 1
        return tuple(out)

    def degree(self, mono: Monomial) -> Degree:
        d = self.d
        return tuple(sum(mono[i * d + a] for i in range(self.n)) for a in range(d))

    def embed(self, slot_mono: Sequence[int], slot: int) -> Monomial:
        out = [0] * self.size
        out[slot * self.d:(slot + 1) * self.d] = slot_mono
        return tuple(out)

    def act(self, perm: Sequence[int], mono: Monomial) -> Monomial:
        """Move slot i to slot perm[i]."""
        d = self.d
        out = [0] * self.size
        for i, j in enumerate(perm):
            out[j * d:(j + 1) * d] = mono[i * d:(i + 1) * d]
        return tuple(out)


def _multidegrees(total: int, d: int) -> list[Degree]:
    return list(compositions(total, d))


def _slot_monomials(algebra: Algebra, delta: Degree) -> list[tuple[int, ...]]:
    """Positive-degree monomials of A with exponents bounded by delta."""
    out = []
    for exps in itertools.product(*[range(x + 1) for x in delta]):
        if any(exps) and algebra.allows(exps):
            out.append(tuple(exps))
    return out


def _sub(a: Degree, b: Sequence[int]) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def dh_graded(
    algebra: Algebra,
    n: int,
    stall: int | None = None,
    cap: int | None = None,
    traces: bool = True,
    multigraded: bool = False,
) -> GradedReport:
    """Graded dimensions (and the full graded character) of DH_n(A)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    stall = default_stall(algebra, n) if stall is None else stall
    cap = default_cap(algebra, n) if cap is None else cap
    if not 1 <= stall <= cap:
        raise ValueError(f"need 1 <= stall <= cap, got stall={stall}, cap={cap}")

    start = time.perf_counter()
    ring = _Ring(algebra, n)
    d = ring.d
    types = list(partitions(n))
    perms = {lam: permutation_of(lam) for lam in types}
    report = GradedReport(algebra, n, method="normal-form")
    report.multidims = {} if multigraded else None
    report.graded_traces = {} if traces else None
    char_total = {lam: 0 for lam in types}

    zero = (0,) * ring.size
    # per multidegree of the previous total degree: basis and normal forms
    basis: dict[Degree, list[Monomial]] = {(0,) * d: [zero]}
    nf: dict[Degree, dict[Monomial, dict[Monomial, Fraction]]] = {(0,) * d: {zero: {zero: Fraction(1)}}}
    # every previous degree's bases, needed for the power-sum relations
    all_bases: dict[Degree, list[Monomial]] = dict(basis)

    report.dims[0] = 1
    if traces:
        report.graded_traces[0] = {lam: 1 for lam in types}
        for lam in types:
            char_total[lam] += 1
    if multigraded:
        report.multidims[(0,) * d] = 1
    report.stats.append({"degree": 0, "ambient": 1, "relations": 0, "rank": 0, "dim": 1})

    zeros_seen = 0 if d else stall
    degree = 0
    while zeros_seen < stall:
        degree += 1
        if degree > cap:
            report.converged = False
            report.seconds = time.perf_counter() - start
            if traces:
                report.traces = char_total
            raise NonConvergence(
                f"DH_{n}({algebra}) did not vanish for {stall} consecutive degrees by degree {cap}",
                report,
            )
        if not any(basis.values()):
            # the previous degree vanished, so this one is spanned by nothing
            report.dims[degree] = 0
            report.stats.append({"degree": degree, "ambient": 0, "relations": 0, "rank": 0, "dim": 0})
            if traces:
                report.graded_traces[degree] = {lam: 0 for lam in types}
            zeros_seen += 1
            basis, nf = {}, {}
            continue

        new_basis: dict[Degree, list[Monomial]] = {}
        new_nf: dict[Degree, dict[Monomial, dict[Monomial, Fraction]]] = {}
        dim_here = 0
        stat = {"degree": degree, "ambient": 0, "relations": 0, "rank": 0}
        graded = {lam: 0 for lam in types}
        for delta in _multidegrees(degree, d):
            block = _block(ring, delta, nf, all_bases, stat)
            if block is None:
                if multigraded:
                    report.multidims[delta] = 0
                continue
            b_delta, nf_delta = block
            new_basis[delta] = b_delta
            new_nf[delta] = nf_delta
            dim_here += len(b_delta)
            if multigraded:
                report.multidims[delta] = len(b_delta)
            if traces:
                for lam in types:
                    perm = perms[lam]
                    tr = sum(nf_delta[ring.act(perm, u)].get(u, 0) for u in b_delta)
                    graded[lam] += int(tr) if Fraction(tr).denominator == 1 else tr
        basis, nf = new_basis, new_nf
        all_bases.update(new_basis)
        report.dims[degree] = dim_here
        stat["dim"] = dim_here
        report.stats.append(stat)
        if traces:
            for lam in types:
                if Fraction(graded[lam]).denominator != 1:
                    raise ArithmeticError(f"non-integral trace {graded[lam]} at degree {degree}")
                graded[lam] = int(graded[lam])
                char_total[lam] += graded[lam]
            report.graded_traces[degree] = graded
        zeros_seen = zeros_seen + 1 if dim_here == 0 else 0

    report.converged = True
    report.seconds = time.perf_counter() - start
    if traces:
        report.traces = char_total
    return report


def _block(ring: _Ring, delta: Degree, prev_nf, all_bases, stat):
    """Quotient basis and normal forms for one multidegree block, or None if the block is zero."""
    d = ring.d
    spanning: set[Monomial] = set()
    for v in range(ring.size):
        a = ring.var_of(v)
        if delta[a] == 0:
            continue
        lower = _sub(delta, [1 if b == a else 0 for b in range(d)])
        for u in all_bases.get(lower, ()):
            w = ring.times(u, v)
            if w is not None:
                spanning.add(w)
    if not spanning:
        return None
    monos = list(ring.monomials(delta))

    def lift(v: int, form: dict[Monomial, Fraction]) -> dict[Monomial, Fraction]:
        out: dict[Monomial, Fraction] = {}
        for u, c in form.items():
            w = ring.times(u, v)
            if w is not None:
                out[w] = out.get(w, 0) + c
        return {k: c for k, c in out.items() if c}

    def rep(mono: Monomial) -> dict[Monomial, Fraction]:
        v0 = ring.first_var(mono)
        lower = _sub(delta, [1 if b == ring.var_of(v0) else 0 for b in range(d)])
        # a block missing from prev_nf had a zero quotient, so every normal form there is 0
        return lift(v0, prev_nf.get(lower, {}).get(ring.divide(mono, v0), {}))

    # reversed order makes the lexicographically smallest monomials standard
    ech = Echelon(key=lambda m: tuple(-x for x in m))
    reps = {w: rep(w) for w in monos}
    relations = 0

    for v in range(ring.size):
        a = ring.var_of(v)
        if delta[a] == 0:
            continue
        lower = _sub(delta, [1 if b == a else 0 for b in range(d)])
        for w, form in prev_nf.get(lower, {}).items():
            row = lift(v, form)
            target = ring.times(w, v)
            if target is not None:
                add_scaled(row, reps[target], -1)
            if row:
                relations += 1
                ech.insert(row)

    for m in _slot_monomials(ring.algebra, delta):
        lower = _sub(delta, m)
        for u in all_bases.get(lower, ()):
            row: dict[Monomial, Fraction] = {}
            for i in range(ring.n):
                prod_mono = tuple(x + y for x, y in zip(u, ring.embed(m, i)))
                if ring.nonzero(prod_mono):
                    add_scaled(row, reps[prod_mono], 1)
            if row:
                relations += 1
                ech.insert(row)

    stat["ambient"] += len(spanning)
    stat["relations"] += relations
    stat["rank"] += ech.rank
    b_delta = sorted(c for c in spanning if c not in ech.rows)
    if not b_delta:
        return None
    nf_delta = {w: ech.reduce(reps[w]) for w in monos}
    return b_delta, nf_delta


def dh_graded_dims(algebra: Algebra, n: int, stall: int | None = None, cap: int | None = None,
                   multigraded: bool = False) -> GradedReport:
    return dh_graded(algebra, n, stall, cap, traces=False, multigraded=multigraded)


def dh_character(algebra: Algebra, n: int, stall: int | None = None, cap: int | None = None) -> dict[tuple[int, ...], int]:
    return dh_graded(algebra, n, stall, cap, traces=True).traces


def dh_trace(algebra: Algebra, n: int, cycle_type: Sequence[int], stall: int | None = None,
             cap: int | None = None) -> int:
    lam = tuple(sorted(cycle_type, reverse=True))
    if sum(lam) != n or any(c <= 0 for c in lam):
        raise ValueError(f"{tuple(cycle_type)} is not a cycle type of S_{n}")
    return dh_character(algebra, n, stall, cap)[lam]


def weyl_weight_oracle(algebra: Algebra, r: int, n: int, stall: int | None = None,
                       cap: int | None = None, report: GradedReport | None = None) -> WeightTable:
    """Weight table of W^A(n omega_1) for gl_r as the Schur-Weyl image of DH_n(A)."""
    if report is None:
        report = dh_graded(algebra, n, stall, cap, traces=True)
    return weight_table_from_traces(report.traces, r)


# -- direct engine ---------------------------------------------------------------


def dh_graded_dims_direct(algebra: Algebra, n: int, max_degree: int) -> dict[int, int]:
    """Per total degree: ambient monomial count minus rank of {p_m * monomial}.

    No normal forms, no recursion on degree: a literal reading of the
    definition, for cross-checking on small inputs.
    """
    ring = _Ring(algebra, n)
    d = ring.d
    dims = {}
    for degree in range(max_degree + 1):
        total = 0
        for delta in _multidegrees(degree, d):
            ambient = list(ring.monomials(delta))
            index = {w: j for j, w in enumerate(ambient)}
            rows = []
            for m in _slot_monomials(algebra, delta):
                for u in ring.monomials(_sub(delta, m)):
                    row: dict[int, int] = {}
                    for i in range(n):
                        w = tuple(x + y for x, y in zip(u, ring.embed(m, i)))
                        if w in index:
                            row[index[w]] = row.get(index[w], 0) + 1
                    if row:
                        rows.append(row)
            rank = rank_fraction_free(rows)
            if rank > len(ambient):
                raise AssertionError("rank exceeds ambient dimension")
            total += len(ambient) - rank
        dims[degree] = total
    return dims


def trace_formula_candidate(n: int, cycle_type: Sequence[int]) -> Fraction:
    """2^{n-K} (n+1)^{n-2-K} prod_i binom(2k_i+1, k_i+1), cycles of length k_i+1, K = sum k_i.

    The bracket in the source statement is read as an ordinary binomial; this
    is an unverified interpretation and is only ever reported, never asserted.
    """
    ks = [c - 1 for c in cycle_type]
    big_k = sum(ks)
    value = Fraction(2) ** (n - big_k) * Fraction(n + 1) ** (n - 2 - big_k)
    for k in ks:
        value *= comb(2 * k + 1, k + 1)
    return value


def trace_formula_report(n: int, traces: dict[tuple[int, ...], int]) -> list[dict]:
    """Computed traces next to the candidate, read both plainly and twisted by the sign."""
    rows = []
    for lam, t in sorted(traces.items(), reverse=True):
        cand = trace_formula_candidate(n, lam)
        rows.append({
            "cycle_type": list(lam),
            "trace": str(t),
            "candidate": str(cand),
            "agrees": cand == t,
            "agrees_up_to_sign": cycle_sign(lam) * cand == t,
            "status": "unverified interpretation",
        })
    return rows
