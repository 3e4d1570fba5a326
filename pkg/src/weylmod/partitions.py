"""Partitions, transposes, gl_r weights and weight-multiplicity tables.

Partitions are plain tuples of positive integers in weakly decreasing order;
trailing zeros are stripped by :func:`normalize`. Where a fixed length is
needed (a gl_r weight) use :func:`pad`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, Mapping, Sequence

Partition = tuple[int, ...]
Weight = tuple[int, ...]


class RankMismatch(ValueError):
    pass


def is_partition(parts: Sequence[int]) -> bool:
    return all(p >= 0 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


def normalize(parts: Iterable[int]) -> Partition:
    parts = tuple(int(p) for p in parts)
    if not is_partition(parts):
        raise ValueError(f"{parts} is not a partition")
    end = len(parts)
    while end and parts[end - 1] == 0:
        end -= 1
    return parts[:end]


def pad(xi: Sequence[int], r: int) -> Weight:
    xi = normalize(xi)
    if len(xi) > r:
        raise ValueError(f"partition {xi} has more than {r} parts")
    return xi + (0,) * (r - len(xi))


def part(xi: Sequence[int], i: int) -> int:
    """xi_i with 1-based index, zero beyond the length."""
    return xi[i - 1] if 1 <= i <= len(xi) else 0


def transpose(xi: Sequence[int]) -> Partition:
    xi = normalize(xi)
    if not xi:
        return ()
    return tuple(sum(1 for x in xi if x >= j) for j in range(1, xi[0] + 1))


def split_at(xi: Sequence[int], i: int) -> tuple[Partition, Partition]:
    """Return (xi_{>i}, xi_{<=i}) with entries max(xi_j - i, 0) and min(xi_j, i).

    The first component keeps the length of ``xi`` (zero-padded) so that it can
    still be read as a weight of the same rank; the second is normalized.
    """
    xi = tuple(xi)
    top = xi[0] if xi else 0
    if i < 0 or i > top:
        raise ValueError(f"split index {i} outside [0, {top}]")
    upper = tuple(max(x - i, 0) for x in xi)
    lower = normalize(min(x, i) for x in xi)
    return upper, lower


def prime_surgery(xi: Sequence[int]) -> Partition:
    """xi' : grow the first column by one box and shrink column xi_1 by one.

    Both changes only apply when xi_1 > 1; a single-column partition is fixed.
    On the capacity side this turns "no boundary point" parking functions of
    xi^t into all parking functions of (xi')^t.
    """
    xi = normalize(xi)
    if not xi:
        raise ValueError("prime_surgery needs a nonempty partition")
    cols = list(transpose(xi))
    top = xi[0]
    if top > 1:
        cols[0] += 1
        cols[top - 1] -= 1
    if not is_partition(cols):
        raise AssertionError(f"surgery on {xi} produced non-partition columns {cols}")
    return transpose(normalize(cols))


def subtract_root(xi: Sequence[int], k: int, r: int | None = None) -> Weight:
    """xi - alpha_k, alpha_k = e_k - e_{k+1} (1-based k)."""
    r = max(len(xi), k + 1) if r is None else r
    w = list(xi) + [0] * (r - len(xi))
    w[k - 1] -= 1
    w[k] += 1
    return tuple(w)


def partitions(n: int, max_part: int | None = None, max_len: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order."""
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    top = n if max_part is None else min(n, max_part)
    for first in range(top, 0, -1):
        for rest in partitions(n - first, first, None if max_len is None else max_len - 1):
            yield (first,) + rest


def partitions_up_to(size: int, max_len: int | None = None) -> Iterator[Partition]:
    for n in range(size + 1):
        yield from partitions(n, max_len=max_len)


def compositions(n: int, r: int) -> Iterator[Weight]:
    """Weak compositions of n into r parts, lexicographically decreasing."""
    if r == 0:
        if n == 0:
            yield ()
        return
    if r == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, r - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def z_lambda(cycle_type: Partition) -> int:
    """Centralizer order: n!/z is the size of the conjugacy class."""
    counts = Counter(cycle_type)
    return prod(k**m * factorial(m) for k, m in counts.items())


def class_size(cycle_type: Sequence[int]) -> int:
    cycle_type = normalize(sorted(cycle_type, reverse=True))
    return factorial(sum(cycle_type)) // z_lambda(cycle_type)


def cycle_sign(cycle_type: Sequence[int]) -> int:
    return -1 if sum(c - 1 for c in cycle_type) % 2 else 1


def cycles_of(cycle_type: Sequence[int]) -> list[tuple[int, ...]]:
    """Standard representative: consecutive blocks of 0..n-1 as cycles."""
    out, start = [], 0
    for c in cycle_type:
        out.append(tuple(range(start, start + c)))
        start += c
    return out


def permutation_of(cycle_type: Sequence[int]) -> tuple[int, ...]:
    """One-line notation (0-based images) of the standard representative."""
    n = sum(cycle_type)
    perm = list(range(n))
    for cyc in cycles_of(cycle_type):
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return tuple(perm)


def young_class_weights(content: Sequence[int]) -> dict[Partition, Fraction]:
    """Fraction of the Young subgroup S_{k_1} x ... x S_{k_r} in each S_n class."""
    acc: dict[Partition, Fraction] = {}
    blocks = [list(partitions(k)) for k in content]
    for choice in itertools.product(*blocks):
        w = Fraction(1)
        for mu in choice:
            w /= z_lambda(mu)
        lam = tuple(sorted(itertools.chain.from_iterable(choice), reverse=True))
        acc[lam] = acc.get(lam, Fraction(0)) + w
    return acc


@dataclass
class WeightTable:
    """Finitely supported map Z^r -> positive integers (weight multiplicities)."""

    r: int
    entries: dict[Weight, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for k, v in self.entries.items():
            k = tuple(int(x) for x in k)
            if len(k) != self.r:
                raise RankMismatch(f"weight {k} has length != {self.r}")
            v = int(v)
            if v < 0:
                raise ValueError(f"negative multiplicity {v} at {k}")
            if v:
                clean[k] = v
        self.entries = clean

    @classmethod
    def unit(cls, r: int) -> "WeightTable":
        return cls(r, {(0,) * r: 1})

    @classmethod
    def vector(cls, r: int) -> "WeightTable":
        return cls.exterior(r, 1)

    @classmethod
    def exterior(cls, r: int, i: int) -> "WeightTable":
        """Weights of the i-th exterior power of the vector representation."""
        entries = {}
        for ones in itertools.combinations(range(r), i):
            entries[tuple(1 if j in ones else 0 for j in range(r))] = 1
        return cls(r, entries)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def __getitem__(self, k: Sequence[int]) -> int:
        return self.entries.get(tuple(k), 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightTable):
            return NotImplemented
        return self.r == other.r and self.entries == other.entries

    def __add__(self, other: "WeightTable") -> "WeightTable":
        if self.r != other.r:
            raise RankMismatch(f"rank {self.r} vs {other.r}")
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return WeightTable(self.r, out)

    def scale(self, c: int) -> "WeightTable":
        return WeightTable(self.r, {k: c * v for k, v in self.entries.items()})

    def __mul__(self, other: "WeightTable") -> "WeightTable":
        return convolve(self, other)

    def power(self, e: int) -> "WeightTable":
        out = WeightTable.unit(self.r)
        base = self
        while e:
            if e & 1:
                out = convolve(out, base)
            e >>= 1
            if e:
                base = convolve(base, base)
        return out

    def difference(self, other: "WeightTable") -> dict[Weight, int]:
        """Signed entrywise difference; empty dict means equal tables."""
        if self.r != other.r:
            raise RankMismatch(f"rank {self.r} vs {other.r}")
        keys = set(self.entries) | set(other.entries)
        diff = {k: self[k] - other[k] for k in keys}
        return {k: v for k, v in diff.items() if v}

    def is_weyl_symmetric(self) -> bool:
        for k, v in self.entries.items():
            for p in set(itertools.permutations(k)):
                if self.entries.get(p, 0) != v:
                    return False
        return True

    def sorted_items(self) -> list[tuple[Weight, int]]:
        return sorted(self.entries.items(), reverse=True)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "entries": [{"k": list(k), "dim": str(v)} for k, v in self.sorted_items()],
            "total": str(self.total),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WeightTable":
        table = cls(int(data["r"]), {tuple(e["k"]): int(e["dim"]) for e in data["entries"]})
        if "total" in data and int(data["total"]) != table.total:
            raise ValueError("weight table total does not match its entries")
        return table

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in self.sorted_items())
        return f"WeightTable(r={self.r}, {{{body}}})"


def convolve(a: WeightTable, b: WeightTable) -> WeightTable:
    """Character of a tensor product: entries[k] = sum over u+v=k of a[u] b[v]."""
    if a.r != b.r:
        raise RankMismatch(f"cannot convolve rank {a.r} with rank {b.r}")
    out: dict[Weight, int] = {}
    for u, x in a.entries.items():
        for v, y in b.entries.items():
            k = tuple(p + q for p, q in zip(u, v))
            out[k] = out.get(k, 0) + x * y
    return WeightTable(a.r, out)
