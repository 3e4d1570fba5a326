"""Exact integer/rational helpers and finite-difference polynomial fitting."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterable, Mapping, Sequence

Rational = Fraction


class InexactDivision(ArithmeticError):
    """A division that the closed formulas require to be exact left a remainder."""


class NotPolynomial(ValueError):
    pass


class GridTooSmall(ValueError):
    pass


def exact_div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError(f"exact_div({a}, 0)")
    q, rem = divmod(a, b)
    if rem:
        raise InexactDivision(f"{a} is not divisible by {b}")
    return q


def as_int(x: Fraction | int) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise InexactDivision(f"{x} is not an integer")
    return x.numerator


def binomial(n: int, k: int) -> int:
    """C(n, k); zero when k < 0, k > n, or n < 0."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def multinomial(ks: Sequence[int]) -> int:
    if any(k < 0 for k in ks):
        return 0
    return exact_div(factorial(sum(ks)), prod(factorial(k) for k in ks))


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError(f"catalan({n}): n must be nonnegative")
    return exact_div(comb(2 * n, n), n + 1)


def narayana(n: int, k: int) -> int:
    """binom(n+1, k) binom(n+1, n-k) / (n+1): the sl_2 weight nω-kα count at d=2."""
    if n < 0 or k < 0 or k > n:
        return 0
    return exact_div(binomial(n + 1, k) * binomial(n + 1, n - k), n + 1)


def to_json_int(x: int) -> str:
    return str(int(x))


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _binomial_basis(j: int, shift: int) -> list[Fraction]:
    """Monomial coefficients of binom(x - shift, j) as a polynomial in x."""
    coeffs = [Fraction(1)]
    for t in range(j):
        coeffs = _poly_mul(coeffs, [Fraction(-shift - t), Fraction(1)])
    f = factorial(j)
    return [c / f for c in coeffs]


@dataclass(frozen=True)
class FittedPoly:
    variables: tuple[str, ...]
    coefficients: Mapping[tuple[int, ...], Fraction] = field(hash=False)
    degrees: tuple[int, ...]

    def __call__(self, *point: int | Fraction) -> Fraction:
        if len(point) != len(self.variables):
            raise ValueError("point has wrong number of coordinates")
        total = Fraction(0)
        for exps, c in self.coefficients.items():
            total += c * prod(Fraction(x) ** e for x, e in zip(point, exps))
        return total

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for exps in sorted(self.coefficients, key=lambda e: (-sum(e), tuple(-x for x in e))):
            c = self.coefficients[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e
            )
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"({c})*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "degrees": list(self.degrees),
            "coefficients": [
                {"exponents": list(e), "value": str(c)}
                for e, c in sorted(self.coefficients.items())
            ],
        }


def _axis_degree(grid: dict, shape: Sequence[int], axis: int) -> int | None:
    """Highest nonvanishing forward-difference order along one axis (None if none vanish)."""
    size = shape[axis]
    other_axes = [range(s) for i, s in enumerate(shape) if i != axis]
    lines = []
    for rest in itertools.product(*other_axes):
        line = []
        for t in range(size):
            idx = list(rest)
            idx.insert(axis, t)
            line.append(grid[tuple(idx)])
        lines.append(line)

    layer = 0
    while True:
        if all(v == 0 for line in lines for v in line):
            return layer - 1
        if len(lines[0]) == 1:
            return None
        lines = [[b - a for a, b in zip(line, line[1:])] for line in lines]
        layer += 1


def finite_difference_fit(
    samples: Mapping[tuple[int, ...], int | Fraction] | Iterable[tuple[tuple[int, ...] | int, int | Fraction]],
    variables: Sequence[str] | None = None,
) -> FittedPoly:
    """Interpolate samples on a unit-spaced rectangular grid by Newton forward differences.

    Degree in each variable is detected by iterated differences vanishing, with
    at least two vanishing layers required as confirmation.
    """
    items = samples.items() if isinstance(samples, Mapping) else samples
    data: dict[tuple[int, ...], Fraction] = {}
    for point, value in items:
        if isinstance(point, int):
            point = (point,)
        data[tuple(point)] = Fraction(value)
    if not data:
        raise ValueError("no samples")
    nvars = len(next(iter(data)))
    if variables is None:
        variables = ("n",) if nvars == 1 else tuple(f"x{i + 1}" for i in range(nvars))
    variables = tuple(variables)
    if len(variables) != nvars:
        raise ValueError("variable names do not match sample dimension")

    axes = [sorted({p[i] for p in data}) for i in range(nvars)]
    for i, ax in enumerate(axes):
        if ax != list(range(ax[0], ax[0] + len(ax))):
            raise ValueError(f"samples along variable {variables[i]} are not consecutive integers")
    shape = [len(ax) for ax in axes]
    origin = tuple(ax[0] for ax in axes)
    if len(data) != prod(shape):
        raise ValueError("samples do not form a full rectangular grid")

    grid = {
        tuple(p[i] - origin[i] for i in range(nvars)): v for p, v in data.items()
    }

    if len(data) == 1:
        (v,) = grid.values()
        coeffs = {(0,) * nvars: v} if v else {}
        return FittedPoly(variables, coeffs, (0,) * nvars)

    degrees = []
    for axis in range(nvars):
        if shape[axis] == 1:
            degrees.append(0)
            continue
        deg = _axis_degree(grid, shape, axis)
        if deg is None:
            raise NotPolynomial(
                f"not polynomial on this grid (variable {variables[axis]}): no forward difference "
                f"vanishes within {shape[axis]} points"
            )
        if shape[axis] < max(deg, 0) + 3:
            raise GridTooSmall(
                f"grid too small: variable {variables[axis]} has degree {deg} "
                f"but only {shape[axis]} points (need {max(deg, 0) + 3})"
            )
        degrees.append(max(deg, 0))

    # Newton coefficients: mixed forward differences at the grid origin.
    table = dict(grid)
    for axis in range(nvars):
        nxt = {}
        ranges = [range(degrees[a] + 1) if a <= axis else range(shape[a]) for a in range(nvars)]
        for idx in itertools.product(*ranges):
            j = idx[axis]
            # Δ^j along axis = Σ_t (-1)^{j-t} C(j,t) f(.., t, ..)
            acc = Fraction(0)
            for t in range(j + 1):
                src = list(idx)
                src[axis] = t
                acc += (-1) ** (j - t) * comb(j, t) * table[tuple(src)]
            nxt[idx] = acc
        table = nxt

    coeffs: dict[tuple[int, ...], Fraction] = {}
    for js in itertools.product(*[range(d + 1) for d in degrees]):
        c = table[js]
        if not c:
            continue
        factors = [_binomial_basis(j, origin[i]) for i, j in enumerate(js)]
        for exps in itertools.product(*[range(len(f)) for f in factors]):
            term = c * prod(f[e] for f, e in zip(factors, exps))
            if term:
                coeffs[exps] = coeffs.get(exps, Fraction(0)) + term
    coeffs = {e: c for e, c in coeffs.items() if c}

    fitted = FittedPoly(variables, coeffs, tuple(degrees))
    for p, v in data.items():
        if fitted(*p) != v:
            raise AssertionError(f"interpolant does not reproduce sample at {p}")
    actual = tuple(max((e[i] for e in coeffs), default=0) for i in range(nvars))
    if actual != fitted.degrees:
        raise AssertionError(f"detected degrees {fitted.degrees} but expanded form has {actual}")
    return fitted

