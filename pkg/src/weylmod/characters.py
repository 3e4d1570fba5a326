"""Characters of Weyl modules and parking-function representations.

Characters are kept as weight tables: tensor products become convolutions and
the recurrences below never need Littlewood-Richardson coefficients. Schur
expansions are only produced for reporting.

Notation: c(xi) is the gl_r character of the Schur-Weyl image of the
sign-twisted permutation representation on parking functions of xi^t, read
off from the subset model.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from . import parking
from .exactnum import as_int
from .partitions import (
    Partition,
    WeightTable,
    compositions,
    normalize,
    pad,
    partitions,
    prime_surgery,
    split_at,
    subtract_root,
    transpose,
    young_class_weights,
    z_lambda,
)


class NotACharacter(ArithmeticError):
    """Class-function data whose Young averages or Schur coefficients are not integers."""


def c1_weight_table(r: int, lam: Sequence[int]) -> WeightTable:
    """W^1(lambda) as the tensor product of fundamental modules wedge^i V.

    ``lam`` lists the coefficients of omega_1..omega_{r-1}; an optional r-th
    entry is the power of the determinant.
    """
    if len(lam) > r:
        raise ValueError(f"at most {r} fundamental-weight coefficients for gl_{r}")
    if any(x < 0 for x in lam):
        raise ValueError("fundamental-weight coefficients must be nonnegative")
    table = WeightTable.unit(r)
    for i, a in enumerate(lam, start=1):
        if a:
            table = table * WeightTable.exterior(r, i).power(a)
    return table


def c2_weight_table(r: int, xi: Sequence[int]) -> WeightTable:
    """Weight table of c(xi) by counting subsets in the r-row subset model."""
    xi = normalize(xi)
    if not xi:
        return WeightTable.unit(r)
    return parking.subset_table(transpose(xi), r)


_memo_lock = threading.Lock()
_memo: dict[tuple, WeightTable] = {}


def _memoized(key: tuple, compute) -> WeightTable:
    with _memo_lock:
        hit = _memo.get(key)
    if hit is not None:
        return hit
    value = compute()
    with _memo_lock:
        _memo.setdefault(key, value)
    return value


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


def _lowest(xi: Partition, r: int) -> int:
    return xi[r - 1] if len(xi) >= r else 0


def _is_base(xi: Partition, r: int) -> bool:
    # Single columns, and r-row rectangles where every column is forced full
    # and the summation range is empty.
    return not xi or xi[0] == 1 or (len(xi) == r and xi[0] == xi[-1])


def c2_recurrence(r: int, xi: Sequence[int]) -> WeightTable:
    """c(xi) = sum_{i = xi_r}^{xi_1 - 1} c((xi_{>i})') c(xi_{<=i}), split by last boundary point."""
    xi = normalize(xi)
    if len(xi) > r:
        return WeightTable(r)
    if _is_base(xi, r):
        return c2_weight_table(r, xi)

    def compute() -> WeightTable:
        total = WeightTable(r)
        for i in range(_lowest(xi, r), xi[0]):
            upper, lower = split_at(xi, i)
            top = c2_recurrence(r, prime_surgery(normalize(upper)))
            if top.entries:
                total = total + top * c2_recurrence(r, lower)
        return total

    return _memoized(("c2", r, xi), compute)


def _signed_sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def rec_ii_residual(r: int, xi: Sequence[int], k: int) -> dict[tuple[int, ...], int]:
    """LHS minus RHS of the alpha_k-difference recurrence; empty when it holds.

    c(xi) - c(xi - alpha_k) = c(xi_{>xi_k-1}) c(xi_{<=xi_k-1})
        + sum_{i=xi_{k+1}+1}^{xi_k-2} c(xi_{>i} - alpha_k) c(xi_{<=i})
    with every term taken from enumeration.
    """
    w = pad(xi, r)
    if not 1 <= k < r:
        raise ValueError(f"row index k={k} must lie in 1..{r - 1}")
    hi, lo = w[k - 1], w[k]
    if hi - lo <= 1:
        raise ValueError(f"need xi_k - xi_(k+1) > 1, got {hi} - {lo}")

    lhs = _signed_sub(c2_weight_table(r, w).entries, c2_weight_table(r, subtract_root(w, k, r)).entries)
    upper, lower = split_at(w, hi - 1)
    rhs = c2_weight_table(r, upper) * c2_weight_table(r, lower)
    for i in range(lo + 1, hi - 1):
        upper, lower = split_at(w, i)
        rhs = rhs + c2_weight_table(r, subtract_root(upper, k, r)) * c2_weight_table(r, lower)
    return _signed_sub(lhs, rhs.entries)


def cl_weight_table(r: int, xi: Sequence[int], l: int, method: str = "enumerate") -> WeightTable:
    """Character of the truncated family PF^(l)(xi^t) under Schur-Weyl."""
    if l < 1:
        raise ValueError("truncation parameter l must be >= 1")
    xi = normalize(xi)
    if method == "enumerate":
        if not xi:
            return WeightTable.unit(r)
        return parking.subset_table(transpose(xi), r, l=l)
    if method != "recurrence":
        raise ValueError(f"unknown method {method!r}")
    if len(xi) > r:
        return WeightTable(r)
    if _is_base(xi, r) or xi[0] <= l:
        # fewer than l interior positions (or all of them boundary points),
        # so the truncation is vacuous
        return c2_recurrence(r, xi)

    def compute() -> WeightTable:
        total = WeightTable(r)
        for i in range(max(xi[0] - l, _lowest(xi, r)), xi[0]):
            upper, lower = split_at(xi, i)
            top = c2_recurrence(r, prime_surgery(normalize(upper)))
            if top.entries:
                total = total + top * cl_weight_table(r, lower, l, "recurrence")
        return total

    return _memoized(("cl", r, l, xi), compute)


@dataclass
class SymFuncPS:
    """Degree-n symmetric function in the power-sum basis."""

    n: int
    coefficients: dict[Partition, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for lam, c in self.coefficients.items():
            lam = normalize(sorted(lam, reverse=True))
            if sum(lam) != self.n:
                raise ValueError(f"cycle type {lam} does not partition {self.n}")
            c = Fraction(c)
            if c:
                clean[lam] = clean.get(lam, Fraction(0)) + c
        self.coefficients = {k: v for k, v in clean.items() if v}

    @classmethod
    def from_traces(cls, traces: Mapping[Partition, int | Fraction]) -> "SymFuncPS":
        """Frobenius characteristic: sum over cycle types of trace/z * p."""
        n = _degree_of(traces)
        return cls(n, {lam: Fraction(t) / z_lambda(normalize(lam)) for lam, t in traces.items()})

    @classmethod
    def power_sum(cls, lam: Sequence[int]) -> "SymFuncPS":
        lam = normalize(lam)
        return cls(sum(lam), {lam: Fraction(1)})

    def traces(self) -> dict[Partition, Fraction]:
        return {lam: self.coefficients.get(lam, Fraction(0)) * z_lambda(lam) for lam in partitions(self.n)}

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for lam, c in sorted(self.coefficients.items(), reverse=True):
            name = "p" + "".join(map(str, lam)) if max(lam) < 10 else f"p{list(lam)}"
            terms.append(name if c == 1 else f"({c})*{name}")
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "power_sums": [
                {"lambda": list(lam), "coeff": str(c)}
                for lam, c in sorted(self.coefficients.items(), reverse=True)
            ],
        }


def _degree_of(traces: Mapping[Partition, object]) -> int:
    sizes = {sum(lam) for lam in traces}
    if len(sizes) != 1:
        raise ValueError("cycle types of mixed sizes")
    return sizes.pop()


def parking_traces(m: Sequence[int], sign_twist: bool = False, l: int | None = None) -> dict[Partition, int]:
    n = sum(m)
    return {lam: parking.perm_trace(m, lam, sign_twist=sign_twist, l=l) for lam in partitions(n)}


def frobenius_char(m: Sequence[int], sign_twist: bool = False, l: int | None = None,
                   budget: int = parking.DEFAULT_BUDGET) -> SymFuncPS:
    n = sum(m)
    # the identity class dominates: cycles are placed lot by lot over subsets
    if len(m) * 3**n > budget:
        raise parking.BudgetExceeded(f"|m| = {n} exceeds the trace budget")
    return SymFuncPS.from_traces(parking_traces(m, sign_twist, l))


def _beta_set(lam: Partition) -> tuple[int, ...]:
    length = len(lam)
    return tuple(p + length - 1 - i for i, p in enumerate(lam))


def _from_beta(beta: Sequence[int]) -> Partition:
    beta = sorted(beta, reverse=True)
    length = len(beta)
    return normalize(b - (length - 1 - i) for i, b in enumerate(beta))


@lru_cache(maxsize=None)
def irreducible_character(lam: Partition, mu: Partition) -> int:
    """chi^lam at cycle type mu by the Murnaghan-Nakayama rule on beta-sets."""
    if sum(lam) != sum(mu):
        raise ValueError(f"{lam} and {mu} are partitions of different sizes")
    if not mu:
        return 1
    h, rest = mu[0], mu[1:]
    beta = _beta_set(lam)
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - h
        if target < 0 or target in occupied:
            continue
        crossed = sum(1 for c in beta if target < c < b)
        new = _from_beta([target if c == b else c for c in beta])
        total += (-1) ** crossed * irreducible_character(new, rest)
    return total


def schur_expand(f: SymFuncPS, integral: bool = True) -> dict[Partition, Fraction | int]:
    """Coefficients of f in the Schur basis, using p_mu = sum_lam chi^lam(mu) s_lam."""
    out: dict[Partition, Fraction | int] = {}
    for lam in partitions(f.n):
        c = sum((a * irreducible_character(lam, mu) for mu, a in f.coefficients.items()), Fraction(0))
        if c:
            if integral:
                if c.denominator != 1:
                    raise NotACharacter(f"Schur coefficient {c} at {lam} is not an integer")
                c = c.numerator
            out[lam] = c
    return out


def schur_json(f: SymFuncPS) -> dict:
    return {
        "n": f.n,
        "schur": [{"lambda": list(lam), "mult": str(c)} for lam, c in schur_expand(f).items()],
    }


def weight_table_from_traces(traces: Mapping[Sequence[int], int | Fraction], r: int) -> WeightTable:
    """Weights of (V^{(x)n} (x) pi)^{S_n}: Young-subgroup averages of the traces of pi."""
    traces = {normalize(sorted(lam, reverse=True)): Fraction(t) for lam, t in traces.items()}
    n = _degree_of(traces)
    missing = [lam for lam in partitions(n) if lam not in traces]
    if missing:
        raise ValueError(f"missing traces for cycle types {missing}")
    entries = {}
    for k in compositions(n, r):
        avg = sum((w * traces[lam] for lam, w in young_class_weights(k).items()), Fraction(0))
        if avg.denominator != 1 or avg < 0:
            raise NotACharacter(f"Young average {avg} at content {k} is not a nonnegative integer")
        entries[k] = as_int(avg)
    return WeightTable(r, entries)
