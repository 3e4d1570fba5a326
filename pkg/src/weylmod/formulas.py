"""Closed-form dimensions and weight multiplicities of Weyl modules W^d(n omega_1).

Every division here must be exact; a remainder means a transcription error and
raises :class:`~weylmod.exactnum.InexactDivision`. The d = 3 values are
conjectural and are reported as such by :func:`is_conjectural`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import factorial, prod
from typing import Sequence

from .exactnum import InexactDivision, as_int, binomial, catalan, exact_div, multinomial
from .partitions import WeightTable, compositions

SUPPORTED_D = (0, 1, 2, 3)


def is_conjectural(d: int) -> bool:
    return d == 3


def _check(d: int, r: int, n: int) -> None:
    if d not in SUPPORTED_D:
        raise ValueError(f"no closed formula for d={d} (known for d <= 3)")
    if r < 1:
        raise ValueError(f"rank r={r} must be >= 1")
    if n < 0:
        raise ValueError(f"n={n} must be >= 0")


def dim_weyl(d: int, r: int, n: int) -> int:
    """dim W^d(n omega_1) for gl_r."""
    _check(d, r, n)
    if d == 0:
        # S^n V: every content vector occurs exactly once
        return binomial(n + r - 1, r - 1)
    if d == 1:
        return r**n
    if d == 2:
        return exact_div(binomial(r * (n + 1), n), n + 1)
    if n == 0:
        return 1
    value = exact_div(r * binomial((2 * r - 1) * (n + 1), n - 1), binomial(n + 1, 2))
    as_product = r * prod(
        Fraction(2 * (n + 1) * r - n - i, n + 2 - i) for i in range(1, n)
    )
    if as_product != value:
        raise InexactDivision(f"d=3 product and binomial forms disagree at r={r}, n={n}")
    return value


def weight_dim(d: int, r: int, n: int, k: Sequence[int]) -> int:
    """Multiplicity of the weight k_1 e_1 + ... + k_r e_r in W^d(n omega_1)."""
    _check(d, r, n)
    k = tuple(k)
    if len(k) != r:
        raise ValueError(f"content {k} does not have {r} entries")
    if sum(k) != n or any(x < 0 for x in k):
        return 0
    if d == 0:
        return 1
    if d == 1:
        return multinomial(k)
    if d == 2:
        return exact_div(prod(binomial(n + 1, x) for x in k), n + 1)
    value = Fraction(2**r) * Fraction(n + 1) ** (r - 2)
    for x in k:
        top = 2 * (n + 1) - x
        value *= Fraction(binomial(top, x), top)
    return as_int(value)


def weight_table(d: int, r: int, n: int) -> WeightTable:
    return WeightTable(r, {k: weight_dim(d, r, n, k) for k in compositions(n, r)})


def sl2_weight_dim(d: int, n: int, k: int) -> int:
    """Multiplicity of n omega - k alpha in the sl_2 Weyl module W^d(n omega)."""
    _check(d, 2, n)
    if k < 0 or k > n:
        return 0
    if d == 0:
        return 1
    if d == 1:
        return binomial(n, k)
    if d == 2:
        return exact_div(binomial(n + 1, k) * binomial(n + 1, n - k), n + 1)
    return exact_div(
        binomial(n + k + 2, 2 * k + 1) * binomial(2 * n - k + 1, k),
        (k + 1) * (n + k + 2),
    )


def product_form(d: int, n: int, k: int) -> tuple[int, int]:
    """(P(n), P(k)) for the factored presentation dim = P(n)/P(k); checks the quotient."""

    def p(x: int) -> int:
        if d == 0:
            return 1
        if d == 1:
            return prod(x - i for i in range(k))
        if d == 2:
            return prod(x - i for i in range(-1, k - 1)) * prod(x - i for i in range(k))
        if d == 3:
            return prod(x + i - k for i in range(2, 2 * k + 2)) * prod(
                2 * x - i - k for i in range(-1, k - 1)
            )
        raise ValueError(f"no product form for d={d}")

    pn, pk = p(n), p(k)
    if Fraction(pn, pk) != sl2_weight_dim(d, n, k):
        raise InexactDivision(f"P(n)/P(k) = {pn}/{pk} differs from the binomial form at d={d}, n={n}, k={k}")
    return pn, pk


def double_point_dim(r: int, n: int) -> int:
    if n <= 0:
        raise ValueError("the double point decomposition needs n >= 1")
    if n == 1:
        return r
    return r**n + (n - 1) * binomial(r, 2) * r ** (n - 2)


def double_point_table(r: int, n: int) -> WeightTable:
    """V^{(x)n} + (n-1) (wedge^2 V (x) V^{(x)n-2}) as a weight table."""
    if n <= 0:
        raise ValueError("the double point decomposition needs n >= 1")
    vec = WeightTable.vector(r)
    table = vec.power(n)
    if n >= 2:
        table = table + (WeightTable.exterior(r, 2) * vec.power(n - 2)).scale(n - 1)
    return table


@dataclass(frozen=True)
class Algebra:
    """A = C[x^1..x^d] (kind "poly"), C[x,y]/(xy) ("double"), or C[x,y]/(x^l) ("xl").

    The augmentation is evaluation at the origin in every case.
    """

    kind: str
    param: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("poly", "double", "xl"):
            raise ValueError(f"unsupported algebra kind {self.kind!r}")
        if self.kind == "poly" and self.param < 0:
            raise ValueError("polynomial algebra needs d >= 0")
        if self.kind == "xl" and self.param < 1:
            raise ValueError("C[x,y]/x^l needs l >= 1")

    @classmethod
    def polynomial(cls, d: int) -> "Algebra":
        return cls("poly", d)

    @classmethod
    def double_point(cls) -> "Algebra":
        return cls("double", 0)

    @classmethod
    def xl_line(cls, l: int) -> "Algebra":
        return cls("xl", l)

    @property
    def nvars(self) -> int:
        return self.param if self.kind == "poly" else 2

    def allows(self, exps: Sequence[int]) -> bool:
        """Is the monomial with these exponents nonzero in A?"""
        if self.kind == "double":
            return not (exps[0] > 0 and exps[1] > 0)
        if self.kind == "xl":
            return exps[0] < self.param
        return True

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        out = [e for e in compositions(degree, self.nvars) if self.allows(e)] if self.nvars else (
            [()] if degree == 0 else []
        )
        return out

    def __str__(self) -> str:
        if self.kind == "poly":
            return f"C[x1..x{self.param}]" if self.param else "C"
        if self.kind == "double":
            return "C[x,y]/(xy)"
        return f"C[x,y]/(x^{self.param})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "param": self.param, "name": str(self)}


def hilbert_nbhd(algebra: Algebra, n: int) -> int:
    """dim A / A_eps^n, counting monomials of degree < n that survive in A."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return sum(len(algebra.monomials(e)) for e in range(n))


def truncated_catalan(l: int, n: int) -> int:
    """C_n^(l): seeds C_n for n <= l+1, then C_{n+1} = 2 C_n + sum_{j=1}^{l-1} C_j C_{n-j}."""
    if l < 1 or n < 1:
        raise ValueError("truncated_catalan needs l >= 1 and n >= 1")
    values = {}
    for t in range(1, n + 1):
        if t <= l + 1:
            values[t] = catalan(t)
        else:
            prev = t - 1
            values[t] = 2 * values[prev] + sum(catalan(j) * values[prev - j] for j in range(1, l))
    return values[n]


def load_oeis(name: str) -> list[int]:
    text = resources.files("weylmod").joinpath("data").joinpath(f"{name}.txt").read_text()
    return [int(line) for line in text.split()]


def sl2_dim(d: int, n: int) -> int:
    return dim_weyl(d, 2, n)


def factorial_ratio(n: int, ks: Sequence[int]) -> int:
    return exact_div(factorial(n), prod(factorial(k) for k in ks))
