"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .linalg import frac

Exps = tuple[int, ...]


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial ``sum c_e * prod v_i**e_i``.

    ``terms`` is a sorted tuple of ``(exponents, coefficient)`` pairs with no
    zero coefficients, so equal polynomials compare and hash equal.
    """

    variables: tuple[str, ...]
    terms: tuple[tuple[Exps, Fraction], ...]

    @classmethod
    def from_dict(cls, variables: Sequence[str], terms: Mapping[Exps, object]) -> "MultiPoly":
        k = len(variables)
        acc: dict[Exps, Fraction] = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != k or any(x < 0 for x in e):
                raise ValidationError(f"bad exponent vector {e} for {k} variables")
            acc[e] = acc.get(e, Fraction(0)) + frac(c)
        return cls(tuple(variables), tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    @classmethod
    def constant(cls, variables: Sequence[str], c=1) -> "MultiPoly":
        return cls.from_dict(variables, {(0,) * len(variables): c})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Exps, c=1) -> "MultiPoly":
        return cls.from_dict(variables, {tuple(exps): c})

    @classmethod
    def coordinates(cls, n: int, prefix: str = "x") -> tuple[str, ...]:
        return tuple(f"{prefix}{i + 1}" for i in range(n))

    def as_dict(self) -> dict[Exps, Fraction]:
        return dict(self.terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def coefficient(self, exps: Exps) -> Fraction:
        return self.as_dict().get(tuple(exps), Fraction(0))

    def __call__(self, *point) -> Fraction:
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        pt = [frac(p) for p in point]
        total = Fraction(0)
        for e, c in self.terms:
            t = c
            for x, k in zip(pt, e):
                if k:
                    t *= x**k
            total += t
        return total

    def _check(self, other: "MultiPoly") -> None:
        if self.variables != other.variables:
            raise ValidationError("polynomials over different variables")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, Fraction(0)) + c
        return MultiPoly.from_dict(self.variables, d)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        c = frac(c)
        return MultiPoly.from_dict(self.variables, {e: c * v for e, v in self.terms})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        d: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, Fraction(0)) + c1 * c2
        return MultiPoly.from_dict(self.variables, d)

    def derivative(self, i: int, order: int = 1) -> "MultiPoly":
        d = {}
        for e, c in self.terms:
            if e[i] >= order:
                ne = list(e)
                ne[i] -= order
                d[tuple(ne)] = c * Fraction(factorial(e[i]), factorial(e[i] - order))
        return MultiPoly.from_dict(self.variables, d)

    def embed(self, variables: Sequence[str], positions: Sequence[int]) -> "MultiPoly":
        """Re-express over a larger variable list; own variable ``i`` goes to ``positions[i]``."""
        k = len(variables)
        d = {}
        for e, c in self.terms:
            ne = [0] * k
            for x, p in zip(e, positions):
                ne[p] += x
            d[tuple(ne)] = c
        return MultiPoly.from_dict(variables, d)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def mixed_derivative_at_zero(p: MultiPoly, variables: Iterable[int]) -> Fraction:
    """``d^k p / d v_{i1} ... d v_{ik}`` at the origin for distinct ``i_j``.

    Equals the coefficient of ``v_{i1} ... v_{ik}`` (each to the first power,
    all other variables absent).
    """
    vs = list(variables)
    if len(set(vs)) != len(vs):
        raise ValidationError("mixed derivative variables must be distinct")
    e = [0] * p.nvars
    for i in vs:
        e[i] = 1
    return p.coefficient(tuple(e))
