"""Polyhedral complexes and constructible functions on them.

A constructible function is stored on the *open-cell basis*: one rational
coefficient per relatively open cell of a polyhedral complex.  In that
basis Euler integration and Verdier duality are one-pass sums, and the
value at a point is the coefficient of the unique open cell containing it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

from .config import get_config
from .errors import CapError, RefinementError, ValidationError
from .faces import face_lattice
from .linalg import common_denominator, frac, vec
from .polytope import Polytope, hull


def _cell_key(c: Polytope):
    return (c.dim, c.vertices)


def _faces_of(c: Polytope) -> list[Polytope]:
    return [F.polytope for F in face_lattice(c).all_faces()]


def _is_face(c: Polytope, sub: Polytope) -> bool:
    if sub == c:
        return True
    verts = set(c.vertices)
    if not all(v in verts for v in sub.vertices):
        return False
    idx = {v: i for i, v in enumerate(c.vertices)}
    want = {idx[v] for v in sub.vertices}
    common = set(range(len(c.vertices)))
    touched = False
    for f in c.facets:
        fv = set(f.vertices)
        if want <= fv:
            common &= fv
            touched = True
    return touched and common == want


def _hyperplanes(c: Polytope) -> list[tuple[tuple, Fraction]]:
    """Affine hyperplanes of ``R^n`` cutting out ``c`` and its facets."""
    s = c.structure
    out = [(tuple(Fraction(x) for x in e), off) for e, off in s.equations]
    out += [(tuple(Fraction(x) for x in f.normal), f.offset) for f in s.facets]
    return out


def _normalize_plane(a, b):
    den = common_denominator([list(a) + [b]])
    ia = [int(x * den) for x in a]
    ib = int(b * den)
    g = reduce(gcd, ia + [ib], 0)
    ia = [x // g for x in ia]
    ib //= g
    first = next(x for x in ia if x)
    if first < 0:
        ia = [-x for x in ia]
        ib = -ib
    return tuple(ia), ib


def clip(P: Polytope, a: Sequence, b, keep: str) -> Polytope | None:
    """``P`` intersected with ``a.x <= b`` (keep='le') or ``>=`` (keep='ge')."""
    sgn = 1 if keep == "le" else -1
    vals = [sgn * (sum(x * y for x, y in zip(a, v)) - b) for v in P.vertices]
    if all(v <= 0 for v in vals):
        return P
    kept = [v for v, s in zip(P.vertices, vals) if s <= 0]
    if not kept:
        return None
    pts = set(kept)
    for u, su in zip(P.vertices, vals):
        if su >= 0:
            continue
        for v, sv in zip(P.vertices, vals):
            if sv <= 0:
                continue
            t = su / (su - sv)
            pts.add(tuple(x + t * (y - x) for x, y in zip(u, v)))
    return hull(pts)


def intersect(P: Polytope, Q: Polytope) -> Polytope | None:
    cur: Polytope | None = P
    for a, b in Q.structure.equations:
        cur = clip(cur, a, b, "le")
        if cur is None:
            return None
        cur = clip(cur, a, b, "ge")
        if cur is None:
            return None
    for f in Q.structure.facets:
        cur = clip(cur, f.normal, f.offset, "le")
        if cur is None:
            return None
    return cur


def split_by(P: Polytope, planes: Iterable[tuple[Sequence, Fraction]]) -> list[Polytope]:
    """Cut ``P`` by every plane; pieces keep the dimension of ``P``."""
    pieces = [P]
    for a, b in planes:
        nxt = []
        for piece in pieces:
            vals = [sum(x * y for x, y in zip(a, v)) - b for v in piece.vertices]
            if min(vals) < 0 < max(vals):
                lo = clip(piece, a, b, "le")
                hi = clip(piece, a, b, "ge")
                nxt.extend(p for p in (lo, hi) if p is not None and p.dim == piece.dim)
            else:
                nxt.append(piece)
        pieces = nxt
    return pieces


def _bbox(P: Polytope):
    cols = list(zip(*P.vertices))
    return [min(c) for c in cols], [max(c) for c in cols]


def _bbox_disjoint(a, b) -> bool:
    return any(hi1 < lo2 or hi2 < lo1 for lo1, hi1, lo2, hi2 in zip(a[0], a[1], b[0], b[1]))


@dataclass(frozen=True)
class PolyComplex:
    """Finite polyhedral complex: bounded cells closed under taking faces."""

    ambient_dim: int
    cells: tuple[Polytope, ...]

    @classmethod
    def from_cells(cls, n: int, cells: Iterable[Polytope]) -> "PolyComplex":
        out = set()
        for c in cells:
            if c.ambient_dim != n:
                raise ValidationError("cell dimension mismatch")
            out.update(_faces_of(c))
        return cls(n, tuple(sorted(out, key=_cell_key)))

    @cached_property
    def index(self) -> dict[Polytope, int]:
        return {c: i for i, c in enumerate(self.cells)}

    @cached_property
    def maximal(self) -> tuple[Polytope, ...]:
        covered = set()
        for c in self.cells:
            for f in _faces_of(c):
                if f != c:
                    covered.add(f)
        return tuple(c for c in self.cells if c not in covered)

    def cell_containing(self, x: Sequence) -> Polytope | None:
        """The unique cell whose relative interior contains ``x``."""
        x = vec(x)
        for c in self.cells:
            if c.in_relint(x):
                return c
        return None

    def validate(self) -> None:
        cells = set(self.cells)
        for c in self.cells:
            for f in _faces_of(c):
                if f not in cells:
                    raise ValidationError("complex is not closed under faces")
        mx = self.maximal
        for i, c in enumerate(mx):
            for d in mx[i + 1:]:
                inter = intersect(c, d)
                if inter is not None and not (_is_face(c, inter) and _is_face(d, inter)):
                    raise ValidationError("cells do not meet in a common face")


def _count_hyperplanes(cells: Iterable[Polytope]) -> int:
    planes = set()
    for c in cells:
        for a, b in _hyperplanes(c):
            planes.add(_normalize_plane(a, b))
    return len(planes)


def refine_common(complexes: Sequence[PolyComplex], *, max_rounds: int = 10_000) -> PolyComplex:
    """A complex refining every input.

    Maximal cells are intersected pairwise; whenever two cells overlap in
    something other than a common face, each is cut by the affine
    hyperplanes defining the other.  Since a convex cell cut by all facet
    hyperplanes of another convex cell splits into their intersection plus
    pieces outside it, this terminates quickly; ``max_rounds`` guards it.
    """
    if not complexes:
        raise ValidationError("nothing to refine")
    n = complexes[0].ambient_dim
    if any(c.ambient_dim != n for c in complexes):
        raise ValidationError("complexes live in different dimensions")
    cfg = get_config()
    if n > cfg.max_complex_dim:
        raise CapError("max_complex_dim", cfg.max_complex_dim, n, "refinement")
    distinct = list(dict.fromkeys(complexes))
    if len(distinct) == 1:
        return distinct[0]
    start = set()
    for c in distinct:
        start.update(c.maximal)
    nplanes = _count_hyperplanes(start)
    if nplanes > cfg.max_facet_hyperplanes:
        raise CapError("max_facet_hyperplanes", cfg.max_facet_hyperplanes, nplanes, "refinement")
    active = set(start)
    boxes = {c: _bbox(c) for c in active}
    rounds = 0
    changed = True
    while changed:
        changed = False
        lst = sorted(active, key=_cell_key)
        for i, C in enumerate(lst):
            for D in lst[i + 1:]:
                if _bbox_disjoint(boxes[C], boxes[D]):
                    continue
                inter = intersect(C, D)
                if inter is None or (_is_face(C, inter) and _is_face(D, inter)):
                    continue
                rounds += 1
                if rounds > max_rounds:
                    raise RefinementError("refinement did not converge")
                pc = split_by(C, _hyperplanes(D))
                pd = split_by(D, _hyperplanes(C))
                if pc == [C] and pd == [D]:
                    # a lower-dimensional cell inside a face: nothing to cut,
                    # the smaller one becomes a face of the bigger one later
                    if C.dim < D.dim and _is_face(C, inter):
                        continue
                    if D.dim < C.dim and _is_face(D, inter):
                        continue
                    raise RefinementError(f"cannot resolve overlap of {C} and {D}")
                active.discard(C)
                active.discard(D)
                for p in pc + pd:
                    active.add(p)
                    boxes.setdefault(p, _bbox(p))
                changed = True
                break
            if changed:
                break
    return PolyComplex.from_cells(n, active)


@dataclass(frozen=True)
class ConstructibleFunction:
    """Rational combination of open-cell indicators on a polyhedral complex.

    Canonical form: zero coefficients dropped and the complex shrunk to the
    closure of the support, so two functions are equal as objects iff they
    have the same cells and coefficients.  Use :func:`equal` to compare
    functions presented on different complexes.
    """

    complex: PolyComplex
    coeffs: tuple[tuple[Polytope, Fraction], ...]

    @property
    def ambient_dim(self) -> int:
        return self.complex.ambient_dim

    @cached_property
    def coeff_map(self) -> dict[Polytope, Fraction]:
        return dict(self.coeffs)

    def coeff(self, cell: Polytope) -> Fraction:
        return self.coeff_map.get(cell, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: Sequence) -> Fraction:
        x = vec(x)
        for c, v in self.coeffs:
            if c.in_relint(x):
                return v
        return Fraction(0)

    def scale(self, c) -> "ConstructibleFunction":
        c = frac(c)
        return make_function(self.ambient_dim, {cell: c * v for cell, v in self.coeffs})

    def __add__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        return combine([self, other], [1, 1])

    def __sub__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        return combine([self, other], [1, -1])

    def __mul__(self, other: "ConstructibleFunction") -> "ConstructibleFunction":
        return multiply(self, other)


def make_function(n: int, coeffs: dict[Polytope, object]) -> ConstructibleFunction:
    """Canonical function from open-cell coefficients (cells must form a complex)."""
    nz = {c: frac(v) for c, v in coeffs.items() if frac(v) != 0}
    cx = PolyComplex.from_cells(n, nz)
    return ConstructibleFunction(cx, tuple(sorted(nz.items(), key=lambda kv: _cell_key(kv[0]))))


def zero_function(n: int) -> ConstructibleFunction:
    return ConstructibleFunction(PolyComplex(n, ()), ())


def _check_dim(n: int) -> None:
    cap = get_config().max_complex_dim
    if n > cap:
        raise CapError("max_complex_dim", cap, n, "constructible functions")


def indicator(P: Polytope) -> ConstructibleFunction:
    """``1_P`` on the open-cell basis: coefficient 1 on every open face."""
    _check_dim(P.ambient_dim)
    return make_function(P.ambient_dim, {F: 1 for F in _faces_of(P)})


def open_indicator(P: Polytope) -> ConstructibleFunction:
    """Indicator of the relative interior of ``P``."""
    _check_dim(P.ambient_dim)
    return make_function(P.ambient_dim, {P: 1})


def boundary_indicator(P: Polytope) -> ConstructibleFunction:
    """``1_P - 1_{relint P}``; the zero function for a point."""
    _check_dim(P.ambient_dim)
    return make_function(P.ambient_dim, {F: 1 for F in _faces_of(P) if F != P})


def transfer(f: ConstructibleFunction, target: PolyComplex) -> dict[Polytope, Fraction]:
    """Coefficients of ``f`` on a complex refining its own."""
    out = {}
    for cell in target.cells:
        v = f(cell.centroid())
        if v:
            out[cell] = v
    return out


def combine(fs: Sequence[ConstructibleFunction], cs: Sequence) -> ConstructibleFunction:
    """``sum_i cs[i] * fs[i]`` on the common refinement."""
    if len(fs) != len(cs):
        raise ValidationError("one coefficient per function required")
    if not fs:
        raise ValidationError("nothing to combine")
    n = fs[0].ambient_dim
    if any(f.ambient_dim != n for f in fs):
        raise ValidationError("functions live in different dimensions")
    cs = [frac(c) for c in cs]
    live = [(f, c) for f, c in zip(fs, cs) if c != 0 and not f.is_zero()]
    if not live:
        return zero_function(n)
    complexes = list(dict.fromkeys(f.complex for f, _ in live))
    if len(complexes) == 1:
        acc: dict[Polytope, Fraction] = {}
        for f, c in live:
            for cell, v in f.coeffs:
                acc[cell] = acc.get(cell, Fraction(0)) + c * v
        return make_function(n, acc)
    R = refine_common(complexes)
    acc = {}
    for f, c in live:
        for cell, v in transfer(f, R).items():
            acc[cell] = acc.get(cell, Fraction(0)) + c * v
    return make_function(n, acc)


def multiply(f: ConstructibleFunction, g: ConstructibleFunction) -> ConstructibleFunction:
    """Pointwise product."""
    if f.ambient_dim != g.ambient_dim:
        raise ValidationError("functions live in different dimensions")
    n = f.ambient_dim
    if f.is_zero() or g.is_zero():
        return zero_function(n)
    R = refine_common([f.complex, g.complex])
    fv = transfer(f, R)
    gv = transfer(g, R)
    return make_function(n, {c: fv[c] * gv[c] for c in fv if c in gv})


def equal(f: ConstructibleFunction, g: ConstructibleFunction) -> bool:
    if f == g:
        return True
    return combine([f, g], [1, -1]).is_zero()


def euler_integral(f: ConstructibleFunction) -> Fraction:
    """``int f dchi = sum_cells coeff * (-1)^dim``."""
    return sum((v * (-1) ** c.dim for c, v in f.coeffs), Fraction(0))


def verdier_dual(f: ConstructibleFunction) -> ConstructibleFunction:
    """Linear extension of ``D(1_{relint F}) = (-1)^dim F * 1_{closure F}``."""
    _check_dim(f.ambient_dim)
    acc: dict[Polytope, Fraction] = {}
    for cell, v in f.coeffs:
        s = v * (-1) ** cell.dim
        for G in _faces_of(cell):
            acc[G] = acc.get(G, Fraction(0)) + s
    return make_function(f.ambient_dim, acc)


def support_codim(f: ConstructibleFunction) -> int:
    if f.is_zero():
        raise ValidationError("support_codim of the zero function")
    return f.ambient_dim - max(c.dim for c, _ in f.coeffs)


def closed_cell_expansion(f: ConstructibleFunction) -> dict[Polytope, Fraction]:
    """Rewrite ``f`` as ``sum a_G 1_{closure G}`` (Moebius inversion on faces)."""
    acc: dict[Polytope, Fraction] = {}
    for cell, v in f.coeffs:
        for G in _faces_of(cell):
            s = v * (-1) ** (cell.dim - G.dim)
            acc[G] = acc.get(G, Fraction(0)) + s
    return {c: v for c, v in acc.items() if v}
