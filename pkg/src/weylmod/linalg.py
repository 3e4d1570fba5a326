"""Exact sparse linear algebra over Q.

Vectors are dicts ``column -> value`` with no stored zeros. Two engines:

* :class:`Echelon` keeps an incrementally grown row echelon basis with
  Fraction entries and reduces arbitrary vectors to normal form modulo the
  row space. The coinvariant oracle uses it to maintain quotient bases.
* :func:`rank_fraction_free` computes the rank of an integer matrix by
  Bareiss-style fraction-free elimination with Markowitz pivot choice, so all
  intermediate values stay integers.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Hashable, Iterable, Mapping

SparseVec = dict[Hashable, Fraction]


def add_scaled(target: dict, source: Mapping, factor) -> None:
    """target += factor * source, in place, dropping zeros."""
    for col, val in source.items():
        new = target.get(col, 0) + factor * val
        if new:
            target[col] = new
        else:
            target.pop(col, None)


class Echelon:
    """Row space of sparse vectors under a fixed total order on columns.

    Each stored row has coefficient 1 at its pivot, which is its largest
    column under ``key``; reduction therefore only ever introduces smaller
    columns and terminates. Columns that never become pivots index the
    quotient basis.
    """

    def __init__(self, key=None):
        self.key = key if key is not None else (lambda c: c)
        self.rows: dict[Hashable, SparseVec] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _top_pivot(self, vec: Mapping) -> Hashable | None:
        best = None
        for col in vec:
            if col in self.rows and (best is None or self.key(col) > self.key(best)):
                best = col
        return best

    def reduce(self, vec: Mapping) -> SparseVec:
        """Normal form: the unique representative supported on non-pivot columns."""
        out: SparseVec = {c: Fraction(v) for c, v in vec.items() if v}
        while True:
            col = self._top_pivot(out)
            if col is None:
                return out
            add_scaled(out, self.rows[col], -out[col])

    def insert(self, vec: Mapping) -> bool:
        """Add a vector to the row space; True if the rank grew."""
        red = self.reduce(vec)
        if not red:
            return False
        pivot = max(red, key=self.key)
        inv = 1 / red[pivot]
        self.rows[pivot] = {c: v * inv for c, v in red.items()}
        return True

    def extend(self, vecs: Iterable[Mapping]) -> int:
        return sum(self.insert(v) for v in vecs)

    def pivots(self) -> set:
        return set(self.rows)


def _primitive(row: dict[Hashable, int]) -> dict[Hashable, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()} if g > 1 else row


def rank_fraction_free(rows: Iterable[Mapping[Hashable, int | Fraction]]) -> int:
    """Rank of a sparse rational matrix, computed with integer arithmetic only.

    Rational rows are cleared of denominators first. Pivots are chosen by the
    Markowitz cost (row weight - 1) * (column count - 1) among the current
    sparsest rows, and eliminations use the cross-multiplication
    ``a*row - b*pivot_row`` followed by content removal, so every entry is an
    exact integer throughout.
    """
    work: list[dict[Hashable, int]] = []
    for row in rows:
        clean = {c: Fraction(v) for c, v in row.items() if v}
        if not clean:
            continue
        den = 1
        for v in clean.values():
            den = den * v.denominator // gcd(den, v.denominator)
        work.append(_primitive({c: int(v * den) for c, v in clean.items()}))

    rank = 0
    while work:
        col_count: dict[Hashable, int] = {}
        for row in work:
            for c in row:
                col_count[c] = col_count.get(c, 0) + 1
        min_len = min(len(row) for row in work)
        best = None
        for idx, row in enumerate(work):
            if len(row) > min_len + 2:
                continue
            for c in row:
                cost = (len(row) - 1) * (col_count[c] - 1)
                cand = (cost, abs(row[c]), idx, c)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        _, _, pidx, pcol = best
        pivot = work.pop(pidx)
        a = pivot[pcol]
        rank += 1
        nxt = []
        for row in work:
            b = row.get(pcol)
            if b is None:
                nxt.append(row)
                continue
            new = {c: a * v for c, v in row.items()}
            add_scaled(new, pivot, -b)
            if new:
                nxt.append(_primitive(new))
        work = nxt
    return rank
