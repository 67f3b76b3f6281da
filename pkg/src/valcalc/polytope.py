"""Exact rational polytopes in V-representation.

A :class:`Polytope` stores only its extreme points, sorted
lexicographically; everything else (affine hull, facets, a triangulation)
is derived on demand and memoized per vertex tuple.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import factorial
from typing import Iterable, Sequence

from . import _hull
from .config import get_config
from .errors import CapError, ValidationError
from .linalg import (
    Vec,
    bareiss_det,
    common_denominator,
    frac,
    nullspace,
    rref,
    vec,
)


@dataclass(frozen=True)
class Facet:
    """Relative facet ``normal . x <= offset`` of a polytope.

    ``normal`` is a primitive integer covector; for lower-dimensional
    polytopes it is only meaningful modulo the annihilator of the affine
    hull (it is the facet normal in pivot coordinates, zero elsewhere).
    """

    normal: tuple[int, ...]
    offset: Fraction
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class Structure:
    dim: int
    origin: Vec
    basis: tuple[Vec, ...]
    pivots: tuple[int, ...]
    equations: tuple[tuple[Vec, Fraction], ...]
    facets: tuple[Facet, ...]
    scale: int
    chart_points: tuple[tuple[int, ...], ...]
    simplices: tuple[tuple[int, ...], ...]


class _StructureCache:
    """Bounded LRU keyed by vertex tuples; lock-protected for thread use."""

    def __init__(self, maxsize: int = 50_000):
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()
        self.maxsize = maxsize

    def get(self, key):
        with self._lock:
            val = self._data.get(key)
            if val is not None:
                self._data.move_to_end(key)
            return val

    def put(self, key, val) -> None:
        with self._lock:
            self._data[key] = val
            self._data.move_to_end(key)
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)


_CACHE = _StructureCache()


@dataclass(frozen=True)
class Polytope:
    """Compact convex rational polytope, canonical by construction.

    Build instances with :func:`hull` (or the helpers in this module); the
    constructor trusts that ``vertices`` are sorted extreme points.
    """

    vertices: tuple[Vec, ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def structure(self) -> Structure:
        s = _CACHE.get(self.vertices)
        if s is None:
            verts, s = _compute_structure(list(self.vertices))
            if verts != self.vertices:
                raise ValidationError("Polytope built from non-extreme points; use hull()")
            _CACHE.put(self.vertices, s)
        return s

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def facets(self) -> tuple[Facet, ...]:
        return self.structure.facets

    def face_polytope(self, indices: Iterable[int]) -> "Polytope":
        return Polytope(tuple(self.vertices[i] for i in sorted(indices)))

    def centroid(self) -> Vec:
        k = len(self.vertices)
        return tuple(sum(col) / k for col in zip(*self.vertices))

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        s = self.structure
        for e, off in s.equations:
            if sum(a * b for a, b in zip(e, x)) != off:
                return False
        return all(sum(a * b for a, b in zip(f.normal, x)) <= f.offset for f in s.facets)

    def in_relint(self, x: Sequence) -> bool:
        """True iff ``x`` lies in the relative interior."""
        x = vec(x)
        s = self.structure
        for e, off in s.equations:
            if sum(a * b for a, b in zip(e, x)) != off:
                return False
        return all(sum(a * b for a, b in zip(f.normal, x)) < f.offset for f in s.facets)

    def __repr__(self) -> str:
        pts = ", ".join("(" + ",".join(str(c) for c in v) + ")" for v in self.vertices)
        return f"Polytope[{pts}]"


def _check_dim(n: int, cap_name: str = "max_dim") -> None:
    limit = getattr(get_config(), cap_name)
    if n > limit:
        raise CapError(cap_name, limit, n, "ambient dimension")


def _compute_structure(pts: list[Vec], order=None) -> tuple[tuple[Vec, ...], Structure]:
    """Extreme points of ``pts`` (sorted, deduplicated) and derived data."""
    p0 = pts[0]
    n = len(p0)
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in pts[1:]]
    basis_rows, pivots = rref(diffs) if diffs else ([], [])
    r = len(pivots)
    basis = tuple(tuple(row) for row in basis_rows)
    equations = []
    if r < n:
        # annihilator of the direction space, scaled to integer rows
        for e in nullspace([list(row) for row in basis_rows], n):
            den = common_denominator([e])
            e = tuple(x * den for x in e)
            equations.append((e, sum(a * b for a, b in zip(e, p0))))
    chart = [tuple(p[c] for c in pivots) for p in pts]
    scale = common_denominator(chart) if r else 1
    ichart = [tuple(int(x * scale) for x in c) for c in chart]

    def lift(a_chart: Sequence[int]) -> tuple[int, ...]:
        a = [0] * n
        for v, c in zip(a_chart, pivots):
            a[c] = v
        return tuple(a)

    if r == 0:
        return (p0,), Structure(0, p0, basis, tuple(pivots), tuple(equations), (), scale, (), ())
    if r == 1:
        lo = min(range(len(pts)), key=lambda i: ichart[i])
        hi = max(range(len(pts)), key=lambda i: ichart[i])
        verts = tuple(sorted({pts[lo], pts[hi]}))
        ilo, ihi = verts.index(pts[lo]), verts.index(pts[hi])
        facets = (
            Facet(lift((-1,)), Fraction(-ichart[lo][0], scale), (ilo,)),
            Facet(lift((1,)), Fraction(ichart[hi][0], scale), (ihi,)),
        )
        facets = tuple(sorted(facets, key=lambda f: (f.normal, f.offset)))
        cps = (ichart[lo], ichart[hi])
        return verts, Structure(1, p0, basis, tuple(pivots), tuple(equations), facets, scale, cps, ((0, 1),))
    extreme, hfacets, simplicial, apex = _hull.full_dim_hull(ichart, order)
    verts = tuple(pts[i] for i in extreme)
    pos = {i: k for k, i in enumerate(extreme)}
    facets = tuple(
        sorted(
            (Facet(lift(a), Fraction(b, scale), tuple(pos[i] for i in vs)) for a, b, vs in hfacets),
            key=lambda f: (f.normal, f.offset),
        )
    )
    used: dict[int, int] = {apex: 0}
    simplices = []
    pa = ichart[apex]
    for vs, a, b in simplicial:
        if sum(x * y for x, y in zip(a, pa)) == b:
            continue  # cone over this boundary simplex is flat
        simplices.append((0,) + tuple(used.setdefault(i, len(used)) for i in vs))
    cps = [None] * len(used)
    for i, k in used.items():
        cps[k] = ichart[i]
    s = Structure(r, p0, basis, tuple(pivots), tuple(equations), facets, scale, tuple(cps), tuple(simplices))
    return verts, s


def hull(points: Iterable[Sequence], n: int | None = None, *, order_seed: int | None = None) -> Polytope:
    """Convex hull of rational points as a canonical :class:`Polytope`.

    ``order_seed`` shuffles the insertion order; the result is identical,
    only the internal triangulation changes (used to test independence of
    volumes from the triangulation).
    """
    pts = [vec(p) for p in points]
    if not pts:
        raise ValidationError("hull of an empty point set")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise ValidationError(f"points have mixed dimensions {sorted(dims)}")
    d = dims.pop()
    if n is not None and n != d:
        raise ValidationError(f"points have dimension {d}, expected {n}")
    if d < 1:
        raise ValidationError("ambient dimension must be at least 1")
    _check_dim(d)
    pts = sorted(set(pts))
    order = None
    if order_seed is not None:
        import random

        order = list(range(len(pts)))
        random.Random(order_seed).shuffle(order)
        order.remove(0)
        order.insert(0, 0)
    verts, s = _compute_structure(pts, order)
    if order is None or _CACHE.get(verts) is None:
        _CACHE.put(verts, s)
    p = Polytope(verts)
    if order is not None:
        p.__dict__["structure"] = s
    return p


def point(coords: Sequence) -> Polytope:
    return Polytope((vec(coords),))


def box(lo: Sequence, hi: Sequence) -> Polytope:
    return hull(product(*[(frac(a), frac(b)) for a, b in zip(lo, hi)]))


def simplex(points: Sequence[Sequence]) -> Polytope:
    return hull(points)


def segment(a: Sequence, b: Sequence) -> Polytope:
    return hull([a, b])


def support_value(P: Polytope, y: Sequence) -> Fraction:
    """``h_P(y) = max_{x in P} y(x)``."""
    y = vec(y)
    if len(y) != P.ambient_dim:
        raise ValidationError("covector dimension mismatch")
    return max(sum(a * b for a, b in zip(y, v)) for v in P.vertices)


def minkowski_sum(bodies: Sequence[Polytope], coeffs: Sequence | None = None) -> Polytope:
    """``sum_i coeffs[i] * bodies[i]``; a zero coefficient contributes ``{0}``."""
    if not bodies:
        raise ValidationError("minkowski_sum needs at least one body")
    if coeffs is None:
        coeffs = [1] * len(bodies)
    if len(coeffs) != len(bodies):
        raise ValidationError("one coefficient per body required")
    cs = [frac(c) for c in coeffs]
    if any(c < 0 for c in cs):
        raise ValidationError("Minkowski coefficients must be nonnegative")
    n = bodies[0].ambient_dim
    if any(b.ambient_dim != n for b in bodies):
        raise ValidationError("bodies have different ambient dimensions")
    shift = [Fraction(0)] * n
    parts = []
    for b, c in zip(bodies, cs):
        if c == 0:
            continue
        if len(b.vertices) == 1:
            shift = [s + c * x for s, x in zip(shift, b.vertices[0])]
        else:
            parts.append([tuple(c * x for x in v) for v in b.vertices])
    # largest summands first keeps intermediate hulls small
    parts.sort(key=len, reverse=True)
    acc: list[Vec] = [tuple(shift)]
    for i, verts in enumerate(parts):
        pts = {tuple(a + b for a, b in zip(p, q)) for p in acc for q in verts}
        if i == len(parts) - 1:
            return hull(pts)
        acc = list(hull(pts).vertices)
    return Polytope((tuple(shift),))


def affine_image(P: Polytope, A: Sequence[Sequence], b: Sequence | None = None) -> Polytope:
    """Hull of ``{A v + b}`` over the vertices of ``P``."""
    A = [vec(row) for row in A]
    m = len(A)
    if any(len(row) != P.ambient_dim for row in A):
        raise ValidationError("matrix columns must match the ambient dimension")
    _check_dim(m)
    b = vec(b) if b is not None else (Fraction(0),) * m
    pts = [tuple(sum(a * x for a, x in zip(row, v)) + bi for row, bi in zip(A, b)) for v in P.vertices]
    return hull(pts)


def reflect(P: Polytope) -> Polytope:
    """``-P``; vertex negation preserves extremality, so no hull is needed."""
    return Polytope(tuple(sorted(tuple(-x for x in v) for v in P.vertices)))


def translate(P: Polytope, t: Sequence) -> Polytope:
    t = vec(t)
    return Polytope(tuple(tuple(a + b for a, b in zip(v, t)) for v in P.vertices))


def dilate(P: Polytope, c) -> Polytope:
    c = frac(c)
    if c < 0:
        raise ValidationError("dilation factor must be nonnegative")
    if c == 0:
        return Polytope(((Fraction(0),) * P.ambient_dim,))
    return Polytope(tuple(tuple(c * x for x in v) for v in P.vertices))


def diagonal_embed(P: Polytope, m: int = 2) -> Polytope:
    """Image of ``P`` under ``x -> (x, ..., x)`` in ``R^(m n)``."""
    _check_dim(m * P.ambient_dim)
    return Polytope(tuple(sorted(tuple(v) * m for v in P.vertices)))


def block_embed(P: Polytope, slot: int, m: int) -> Polytope:
    """Place ``P`` in the ``slot``-th ``n``-block of ``R^(m n)``, zeros elsewhere."""
    n = P.ambient_dim
    if not 0 <= slot < m:
        raise ValidationError(f"slot {slot} out of range for {m} blocks")
    _check_dim(m * n)
    z = (Fraction(0),) * n
    return Polytope(tuple(sorted(z * slot + tuple(v) + z * (m - slot - 1) for v in P.vertices)))


def product_polytope(P: Polytope, Q: Polytope) -> Polytope:
    _check_dim(P.ambient_dim + Q.ambient_dim)
    return Polytope(tuple(sorted(tuple(p) + tuple(q) for p in P.vertices for q in Q.vertices)))


def volume(P: Polytope) -> Fraction:
    """Ambient ``n``-volume; zero for lower-dimensional polytopes."""
    n = P.ambient_dim
    _check_dim(n)
    s = P.structure
    if s.dim < n:
        return Fraction(0)
    if n == 1:
        lo, hi = P.vertices[0][0], P.vertices[-1][0]
        return hi - lo
    total = 0
    pts = s.chart_points
    for simp in s.simplices:
        p0 = pts[simp[0]]
        rows = [[a - b for a, b in zip(pts[i], p0)] for i in simp[1:]]
        total += abs(bareiss_det(rows))
    return Fraction(total, factorial(n) * s.scale**n)


def relative_volume_chart(P: Polytope) -> Fraction:
    """Volume of ``P`` in its pivot-coordinate chart (``dim P``-dimensional).

    Multiply by ``sqrt(det(B B^T))`` for the Euclidean ``dim P``-volume,
    ``B`` being the rref basis of the direction space.
    """
    s = P.structure
    r = s.dim
    if r == 0:
        return Fraction(1)
    pts = s.chart_points
    total = 0
    for simp in s.simplices:
        p0 = pts[simp[0]]
        rows = [[a - b for a, b in zip(pts[i], p0)] for i in simp[1:]]
        total += abs(bareiss_det(rows))
    return Fraction(total, factorial(r) * s.scale**r)
