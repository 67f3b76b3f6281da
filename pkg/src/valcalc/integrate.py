"""Exact integration of polynomials over polytopes.

Each polytope is cut into simplices (cones from one vertex over a
triangulated boundary); on a simplex the integrand is rewritten in
barycentric coordinates and integrated with the Dirichlet moments
``int_simplex lambda^b = d! vol * b! / (d + |b|)!``.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .config import get_config
from .errors import CapError, ValidationError
from .linalg import bareiss_det
from .polynomials import MultiPoly
from .polytope import Polytope, _check_dim, volume


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return out


class _SimplexMoments:
    """Integer barycentric expansions of coordinate powers on one simplex."""

    def __init__(self, verts: Sequence[Sequence[int]]):
        self.d = len(verts) - 1
        self.n = len(verts[0])
        k = self.d + 1
        self.lin = []
        for j in range(self.n):
            form = {}
            for i in range(k):
                if verts[i][j]:
                    e = [0] * k
                    e[i] = 1
                    form[tuple(e)] = verts[i][j]
            self.lin.append(form)
        self._pow: dict[tuple[int, int], dict] = {}
        self.one = {(0,) * k: 1}

    def power(self, j: int, k: int) -> dict:
        if k == 0:
            return self.one
        key = (j, k)
        got = self._pow.get(key)
        if got is None:
            got = _poly_mul(self.power(j, k - 1), self.lin[j])
            self._pow[key] = got
        return got

    def moment(self, alpha: Sequence[int]) -> int:
        """``sum_b c_b * b!`` for ``X^alpha = sum_b c_b lambda^b``."""
        poly = self.one
        for j, k in enumerate(alpha):
            if k:
                poly = _poly_mul(poly, self.power(j, k))
        total = 0
        for e, c in poly.items():
            f = 1
            for x in e:
                if x > 1:
                    f *= factorial(x)
            total += c * f
        return total


def _validate(P: Polytope, w: MultiPoly) -> None:
    if w.nvars != P.ambient_dim:
        raise ValidationError(f"weight has {w.nvars} variables, polytope lives in R^{P.ambient_dim}")


def integrate(P: Polytope, w: MultiPoly, *, degree_cap: int | None = None) -> Fraction:
    """``int_P w(x) dx`` over the ambient Lebesgue measure."""
    _validate(P, w)
    n = P.ambient_dim
    _check_dim(n)
    if degree_cap is not None and w.degree() > degree_cap:
        raise CapError("weight_degree_cap", degree_cap, w.degree(), "integrand degree")
    if w.is_zero():
        return Fraction(0)
    if w.is_constant():
        return w.terms[0][1] * volume(P)
    s = P.structure
    if s.dim < n:
        return Fraction(0)
    if n == 1:
        a, b = P.vertices[0][0], P.vertices[-1][0]
        return sum(
            (c * (b ** (e[0] + 1) - a ** (e[0] + 1)) / (e[0] + 1) for e, c in w.terms), Fraction(0)
        )
    by_degree: dict[int, list] = {}
    for e, c in w.terms:
        by_degree.setdefault(sum(e), []).append((e, c))
    pts = s.chart_points
    sums = {p: Fraction(0) for p in by_degree}
    for simp in s.simplices:
        verts = [pts[i] for i in simp]
        p0 = verts[0]
        jac = abs(bareiss_det([[a - b for a, b in zip(v, p0)] for v in verts[1:]]))
        if jac == 0:
            continue
        mom = _SimplexMoments(verts)
        for p, terms in by_degree.items():
            acc = Fraction(0)
            for e, c in terms:
                acc += c * mom.moment(e)
            sums[p] += jac * acc
    scale = s.scale
    total = Fraction(0)
    for p, val in sums.items():
        total += val / (factorial(n + p) * scale ** (n + p))
    return total


def integrate_monomial(P: Polytope, alpha: Sequence[int]) -> Fraction:
    """``int_P x^alpha dx`` with the configured degree cap."""
    alpha = tuple(int(a) for a in alpha)
    cap = get_config().weight_degree_cap
    if sum(alpha) > cap:
        raise CapError("weight_degree_cap", cap, sum(alpha), "monomial degree")
    w = MultiPoly.monomial(MultiPoly.coordinates(P.ambient_dim), alpha)
    return integrate(P, w)
