"""Generalized parking functions PF(m), the dual subset model, and boundary points.

A capacity vector ``m = (m_1, ..., m_N)`` describes N lots; a parking function
is a preference tuple ``f`` of length |m| with values in 1..N. Subsets H live in
{1..r} x {1..N} and are stored as frozensets of 1-based (row, column) pairs.

Enumeration order of :func:`iter_pf` is lexicographic in ``f``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from math import comb
from typing import Iterable, Iterator, Sequence

from .partitions import WeightTable, cycle_sign, normalize

DEFAULT_BUDGET = 10**8

Capacity = tuple[int, ...]
SubsetH = frozenset  # of (row, column) pairs


class BudgetExceeded(RuntimeError):
    pass


def capacity(m: Iterable[int]) -> Capacity:
    m = tuple(int(x) for x in m)
    if not m:
        raise ValueError("capacity vector must have at least one lot")
    if any(x < 0 for x in m):
        raise ValueError(f"capacities must be nonnegative: {m}")
    return m


def prefix_sums(m: Sequence[int]) -> list[int]:
    return list(itertools.accumulate(m))


def _prefix_counts(f: Sequence[int], n_lots: int) -> list[int]:
    hist = [0] * (n_lots + 1)
    for v in f:
        if 1 <= v <= n_lots:
            hist[v] += 1
    return list(itertools.accumulate(hist[1:]))


def _check_length(f: Sequence[int], m: Capacity) -> None:
    if len(f) != sum(m):
        raise ValueError(f"preference of length {len(f)} does not match |m| = {sum(m)}")


def simulate_parking(f: Sequence[int], m: Sequence[int]) -> list[int] | None:
    """Park cars in order; return the lot of each car, or None if some car fails."""
    m = capacity(m)
    _check_length(f, m)
    free = list(m)
    lots = []
    for pref in f:
        lot = pref - 1
        while lot < len(free) and (lot < 0 or free[lot] == 0):
            lot += 1
        if lot >= len(free):
            return None
        free[lot] -= 1
        lots.append(lot + 1)
    return lots


def is_parking(f: Sequence[int], m: Sequence[int], method: str = "inequality") -> bool:
    m = capacity(m)
    _check_length(f, m)
    if method == "simulate":
        return simulate_parking(f, m) is not None
    if method != "inequality":
        raise ValueError(f"unknown method {method!r}")
    if any(v < 1 for v in f):
        return False
    return all(c >= s for c, s in zip(_prefix_counts(f, len(m)), prefix_sums(m)))


def boundary_points(f: Sequence[int], m: Sequence[int]) -> set[int]:
    m = capacity(m)
    if not is_parking(f, m):
        raise ValueError(f"{tuple(f)} is not a parking function for {m}")
    counts, sums = _prefix_counts(f, len(m)), prefix_sums(m)
    return {s for s in range(1, len(m)) if counts[s - 1] == sums[s - 1]}


def has_dense_boundary(bps: set[int], n_lots: int, l: int) -> bool:
    """Every window [s+1, s+l] with 0 <= s < N-l contains a boundary point."""
    if l < 1:
        raise ValueError("truncation level l must be >= 1")
    return all(any(s + j in bps for j in range(1, l + 1)) for s in range(0, n_lots - l))


def is_truncated_pf(f: Sequence[int], m: Sequence[int], l: int) -> bool:
    m = capacity(m)
    if not is_parking(f, m):
        return False
    return has_dense_boundary(boundary_points(f, m), len(m), l)


def iter_pf(m: Sequence[int], budget: int = DEFAULT_BUDGET, l: int | None = None) -> Iterator[tuple[int, ...]]:
    """Stream PF(m) (or PF(m)^(l)) in lexicographic order."""
    m = capacity(m)
    n_lots, size = len(m), sum(m)
    candidates = n_lots**size
    if candidates > budget:
        raise BudgetExceeded(
            f"{candidates} candidate functions exceed the budget {budget}; "
            "use count_pf or the subset model (enumerate_subsets) instead"
        )
    for f in itertools.product(range(1, n_lots + 1), repeat=size):
        if is_parking(f, m) and (l is None or has_dense_boundary(boundary_points(f, m), n_lots, l)):
            yield f


def _count_with_first(args: tuple[Capacity, int, int | None]) -> int:
    m, first, l = args
    n_lots, size = len(m), sum(m)
    total = 0
    for rest in itertools.product(range(1, n_lots + 1), repeat=size - 1):
        f = (first,) + rest
        if is_parking(f, m) and (l is None or has_dense_boundary(boundary_points(f, m), n_lots, l)):
            total += 1
    return total


def enumerate_pf(m: Sequence[int], budget: int = DEFAULT_BUDGET, l: int | None = None, jobs: int = 1) -> int:
    """Exact |PF(m)| (or |PF(m)^(l)|) by exhaustive check of all candidate functions.

    The candidate space is split on the first value when ``jobs > 1``.
    """
    m = capacity(m)
    n_lots, size = len(m), sum(m)
    if n_lots**size > budget:
        raise BudgetExceeded(
            f"{n_lots**size} candidate functions exceed the budget {budget}; "
            "use count_pf or the subset model (enumerate_subsets) instead"
        )
    if size == 0:
        return 1
    tasks = [(m, v, l) for v in range(1, n_lots + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return sum(pool.map(_count_with_first, tasks))
    return sum(map(_count_with_first, tasks))


def count_pf(m: Sequence[int]) -> int:
    """|PF(m)| by summing over how many (labelled) cars prefer lots 1..s."""
    m = capacity(m)
    size = sum(m)
    ways = {0: 1}
    for need in prefix_sums(m):
        nxt: dict[int, int] = defaultdict(int)
        for placed, w in ways.items():
            for after in range(max(placed, need), size + 1):
                nxt[after] += w * comb(size - placed, after - placed)
        ways = nxt
    return ways.get(size, 0)


# -- subset model -----------------------------------------------------------


def content(h: Iterable[tuple[int, int]], r: int) -> tuple[int, ...]:
    k = [0] * r
    for row, _ in h:
        k[row - 1] += 1
    return tuple(k)


def subset_prefix_counts(h: Iterable[tuple[int, int]], n_lots: int) -> list[int]:
    hist = [0] * (n_lots + 1)
    for _, col in h:
        if col <= n_lots:
            hist[col] += 1
    return list(itertools.accumulate(hist[1:]))


def subset_parks(h: Iterable[tuple[int, int]], m: Sequence[int]) -> bool:
    h = list(h)
    return all(c >= s for c, s in zip(subset_prefix_counts(h, len(m)), prefix_sums(m)))


def subset_boundary_points(h: Iterable[tuple[int, int]], m: Sequence[int]) -> set[int]:
    m = capacity(m)
    h = list(h)
    if not subset_parks(h, m):
        raise ValueError("subset violates the prefix condition")
    counts, sums = subset_prefix_counts(h, len(m)), prefix_sums(m)
    return {s for s in range(1, len(m)) if counts[s - 1] == sums[s - 1]}


def iter_subsets(m: Sequence[int], r: int, l: int | None = None) -> Iterator[SubsetH]:
    """All |m|-element H in {1..r} x {1..N} satisfying the prefix condition."""
    m = capacity(m)
    cells = [(i, j) for j in range(1, len(m) + 1) for i in range(1, r + 1)]
    for h in itertools.combinations(cells, sum(m)):
        if not subset_parks(h, m):
            continue
        if l is not None and not has_dense_boundary(subset_boundary_points(h, m), len(m), l):
            continue
        yield frozenset(h)


def subset_table_brute(m: Sequence[int], r: int, l: int | None = None) -> WeightTable:
    counts: dict[tuple[int, ...], int] = defaultdict(int)
    for h in iter_subsets(m, r, l):
        counts[content(h, r)] += 1
    return WeightTable(r, counts)


def subset_table(m: Sequence[int], r: int, l: int | None = None) -> WeightTable:
    """Weight table of the subset model, column by column.

    State after column s is (row contents so far, number of non-boundary
    positions since the last boundary point); the second coordinate is only
    tracked for the truncated family.
    """
    m = capacity(m)
    if l is not None and l < 1:
        raise ValueError("truncation level l must be >= 1")
    n_lots, size = len(m), sum(m)
    sums = prefix_sums(m)
    choices = []
    for mask in range(1 << r):
        choices.append(tuple((mask >> i) & 1 for i in range(r)))
    states: dict[tuple[tuple[int, ...], int], int] = {((0,) * r, 0): 1}
    for s in range(1, n_lots + 1):
        nxt: dict[tuple[tuple[int, ...], int], int] = defaultdict(int)
        for (k, run), w in states.items():
            placed = sum(k)
            for add in choices:
                total = placed + sum(add)
                if total < sums[s - 1] or total > size:
                    continue
                new_run = run
                if s < n_lots and l is not None:
                    new_run = 0 if total == sums[s - 1] else run + 1
                    if new_run >= l:
                        continue
                nxt[(tuple(a + b for a, b in zip(k, add)), new_run)] += w
        states = nxt
    out: dict[tuple[int, ...], int] = defaultdict(int)
    for (k, _), w in states.items():
        if sum(k) == size:
            out[k] += w
    return WeightTable(r, out)


def enumerate_subsets(m: Sequence[int], r: int, k: Sequence[int], method: str = "columns", l: int | None = None) -> int:
    """Number of subsets H with row contents k satisfying the prefix condition."""
    m = capacity(m)
    k = tuple(k)
    if len(k) != r:
        raise ValueError(f"content {k} does not have {r} rows")
    if any(x < 0 for x in k):
        return 0
    if sum(k) != sum(m):
        raise ValueError(f"content sum {sum(k)} does not match |m| = {sum(m)}")
    if method == "columns":
        return subset_table(m, r, l)[k]
    if method == "brute":
        return sum(1 for h in iter_subsets(m, r, l) if content(h, r) == k)
    raise ValueError(f"unknown method {method!r}")


# -- cycle lemma ------------------------------------------------------------


def cyclic_shift(f: Sequence[int], k: int) -> tuple[int, ...]:
    """sigma_k o f, where sigma_k sends 1 -> k, 2 -> k+1, ... cyclically on 1..n+1."""
    n1 = len(f) + 1
    return tuple((v - 1 + k - 1) % n1 + 1 for v in f)


def _satisfies_lemma(g: Sequence[int]) -> bool:
    n = len(g)
    counts = _prefix_counts(g, n + 1)
    return all(counts[s - 1] >= s for s in range(1, n + 1))


def cycle_shift_index(f: Sequence[int]) -> int:
    """The unique k in 1..n+1 for which sigma_k o f has |preimage of 1..s| >= s, s <= n.

    Located via the minimum of F(s) = |f^{-1}(1..s)| - n s/(n+1), scaled by n+1.
    """
    n = len(f)
    if any(not 1 <= v <= n + 1 for v in f):
        raise ValueError(f"values of {tuple(f)} must lie in 1..{n + 1}")
    counts = _prefix_counts(f, n + 1)
    scaled = [(n + 1) * counts[s - 1] - n * s for s in range(1, n + 2)]
    s0 = min(range(1, n + 2), key=lambda s: scaled[s - 1])
    k = n + 2 - s0
    if not _satisfies_lemma(cyclic_shift(f, k)):
        raise AssertionError(f"shift {k} of {tuple(f)} does not park")
    return k


# -- symmetric group structure --------------------------------------------


def perm_trace(m: Sequence[int], cycle_type: Sequence[int], sign_twist: bool = False, l: int | None = None) -> int:
    """Trace of a permutation of the given cycle type on C PF(m) (or PF(m)^(l)).

    Fixed parking functions are constant on cycles, so we place whole cycles
    lot by lot and track the prefix condition.
    """
    m = capacity(m)
    cycle_type = normalize(sorted(cycle_type, reverse=True))
    if sum(cycle_type) != sum(m):
        raise ValueError(f"cycle type {cycle_type} does not partition |m| = {sum(m)}")
    n_lots = len(m)
    sums = prefix_sums(m)
    lengths = list(cycle_type)
    full = (1 << len(lengths)) - 1
    weight = [sum(lengths[i] for i in range(len(lengths)) if mask >> i & 1) for mask in range(full + 1)]

    states: dict[tuple[int, int], int] = {(0, 0): 1}
    for s in range(1, n_lots + 1):
        nxt: dict[tuple[int, int], int] = defaultdict(int)
        for (mask, run), w in states.items():
            rest = full & ~mask
            sub = rest
            while True:
                new = mask | sub
                total = weight[new]
                if total >= sums[s - 1]:
                    new_run = run
                    ok = True
                    if s < n_lots and l is not None:
                        new_run = 0 if total == sums[s - 1] else run + 1
                        ok = new_run < l
                    if ok:
                        nxt[(new, new_run)] += w
                if sub == 0:
                    break
                sub = (sub - 1) & rest
        states = nxt
    fixed = sum(w for (mask, _), w in states.items() if mask == full)
    return cycle_sign(cycle_type) * fixed if sign_twist else fixed
