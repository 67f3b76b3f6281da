"""Characteristic cycles as conic chains in ``T*R^n``.

A chain is a finite sum of pieces ``(relint F) x C`` with rational
multiplicities, where ``C`` is a cone in the conormal space of ``F`` of
dimension ``n - dim F``.  Cones carry no orientation; the sign change of
the fiber flip is folded into the multiplicities by :func:`antipodal`.

Canonical form.  Per base cell the fiber cones and multiplicities define
an almost-everywhere function on the conormal space.  It is resolved on
the arrangement formed by the coordinate hyperplanes of a fixed chart and
every cone facet hyperplane; hyperplanes across which the function never
jumps are then dropped and the remaining chambers become the pieces.  This
form depends only on the function, so two chains on the same base cells
are equal iff their canonical pieces coincide.
"""

from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .config import get_config
from .constructible import (
    ConstructibleFunction,
    PolyComplex,
    _cell_key,
    _normalize_plane,
    closed_cell_expansion,
    refine_common,
    split_by,
)
from .errors import CapError, InvariantError, ValidationError
from .faces import Cone, face_lattice, make_cone, normal_cone
from .linalg import frac, primitive, rref
from .polytope import Polytope, hull

_SIGN_TWIST = True


@contextmanager
def sign_twist(enabled: bool) -> Iterator[None]:
    """Test hook: disable the ``(-1)^dim F`` factor of the fiber flip."""
    global _SIGN_TWIST
    old = _SIGN_TWIST
    _SIGN_TWIST = enabled
    try:
        yield
    finally:
        _SIGN_TWIST = old


Piece = tuple[Polytope, Cone, Fraction]


@dataclass(frozen=True)
class ConicChain:
    ambient_dim: int
    pieces: tuple[Piece, ...]
    projectivized: bool = False

    def is_zero(self) -> bool:
        return not self.pieces

    def bases(self) -> list[Polytope]:
        return list(dict.fromkeys(b for b, _, _ in self.pieces))

    def scale(self, c) -> "ConicChain":
        c = frac(c)
        return make_chain(
            self.ambient_dim, [(b, C, c * m) for b, C, m in self.pieces], projectivized=self.projectivized
        )

    def __neg__(self) -> "ConicChain":
        return self.scale(-1)

    def __add__(self, other: "ConicChain") -> "ConicChain":
        return combine_chains([self, other], [1, 1])

    def __sub__(self, other: "ConicChain") -> "ConicChain":
        return combine_chains([self, other], [1, -1])


class _Fiber:
    """Chart on the conormal space ``ann(dir F)`` of a base cell."""

    def __init__(self, base: Polytope):
        eqs = [e for e, _ in base.structure.equations]
        self.n = base.ambient_dim
        self.rows, self.pivots = rref(eqs) if eqs else ([], [])
        self.k = len(self.rows)

    def to_chart(self, v: Sequence) -> tuple:
        y = tuple(Fraction(v[p]) for p in self.pivots)
        if self.lift(y) != tuple(Fraction(x) for x in v):
            raise InvariantError(f"cone generator {tuple(v)} is not conormal to the base cell")
        return y

    def lift(self, y: Sequence) -> tuple:
        out = [Fraction(0)] * self.n
        for c, row in zip(y, self.rows):
            if c:
                for j, x in enumerate(row):
                    out[j] += c * x
        return tuple(out)


def _cone_facets(k: int, gens: list[tuple]) -> list[tuple]:
    """Outward normals ``a`` with ``C = {y : a.y <= 0}`` for a full cone in ``R^k``."""
    if k == 1:
        signs = {g[0] > 0 for g in gens if g[0] != 0}
        if signs == {True}:
            return [(Fraction(-1),)]
        if signs == {False}:
            return [(Fraction(1),)]
        return []
    H = hull([tuple([Fraction(0)] * k)] + gens)
    return [tuple(Fraction(x) for x in f.normal) for f in H.facets if f.offset == 0]


def _canonical_fiber(base: Polytope, items: list[tuple[Cone, Fraction]]) -> list[tuple[Cone, Fraction]]:
    fib = _Fiber(base)
    n, k = fib.n, fib.k
    for C, _ in items:
        if C.dim != k:
            raise InvariantError(
                f"piece over a {base.dim}-cell has a {C.dim}-dimensional cone; expected {k}"
            )
    if k == 0:
        m = sum((m for _, m in items), Fraction(0))
        return [(make_cone(n, []), m)] if m else []
    cones = []
    planes: dict = {}
    for C, m in items:
        if not m:
            continue
        gens = [fib.to_chart(g) for g in C.generators()]
        facets = _cone_facets(k, gens)
        cones.append((facets, m))
        for a in facets:
            key, _ = _normalize_plane(a, Fraction(0))
            if sum(1 for x in key if x) > 1:
                planes[key] = tuple(Fraction(x) for x in key)
    extra = [planes[key] for key in sorted(planes)]
    chambers = []  # (signature, slice piece, multiplicity)
    for s in itertools.product((1, -1), repeat=k):
        corners = [tuple(Fraction(s[i]) if i == j else Fraction(0) for j in range(k)) for i in range(k)]
        sl = hull(corners)
        for piece in split_by(sl, [(a, Fraction(0)) for a in extra]):
            y = piece.centroid()
            sig = s + tuple(1 if sum(a * b for a, b in zip(p, y)) > 0 else -1 for p in extra)
            m = sum(
                (mm for facets, mm in cones if all(sum(a * b for a, b in zip(f, y)) <= 0 for f in facets)),
                Fraction(0),
            )
            chambers.append((sig, piece, m))
    value = {sig: m for sig, _, m in chambers}
    essential = []
    for j in range(len(extra)):
        pos = k + j
        for sig, m in value.items():
            flip = sig[:pos] + (-sig[pos],) + sig[pos + 1:]
            if flip in value and value[flip] != m:
                essential.append(pos)
                break
    keep = list(range(k)) + essential
    groups: dict = {}
    for sig, piece, m in chambers:
        groups.setdefault(tuple(sig[i] for i in keep), []).append((piece, m))
    out = []
    for grp in groups.values():
        m = grp[0][1]
        if not m:
            continue
        pts = [v for piece, _ in grp for v in piece.vertices]
        rays = [primitive(fib.lift(v)) for v in hull(pts).vertices]
        out.append((make_cone(n, rays), m))
    return out


def make_chain(n: int, pieces: Iterable[Piece], *, projectivized: bool = False) -> ConicChain:
    """Canonical chain from raw pieces whose base cells form a complex."""
    by_base: dict[Polytope, list[tuple[Cone, Fraction]]] = {}
    for base, C, m in pieces:
        if base.ambient_dim != n or C.ambient_dim != n:
            raise ValidationError("piece dimension mismatch")
        m = frac(m)
        if m:
            by_base.setdefault(base, []).append((C, m))
    out = []
    for base in sorted(by_base, key=_cell_key):
        for C, m in _canonical_fiber(base, by_base[base]):
            out.append((base, C, m))
    return ConicChain(n, tuple(out), projectivized)


def _check_dim(n: int) -> None:
    cap = get_config().max_complex_dim
    if n > cap:
        raise CapError("max_complex_dim", cap, n, "characteristic cycles")


def cc_polytope(P: Polytope) -> ConicChain:
    """Sum over faces ``F`` of ``(relint F) x normal_cone(P, F)``."""
    _check_dim(P.ambient_dim)
    lat = face_lattice(P)
    return make_chain(P.ambient_dim, [(F.polytope, normal_cone(P, F), Fraction(1)) for F in lat.all_faces()])


def cc(f: ConstructibleFunction) -> ConicChain:
    """Characteristic cycle, linear in ``f``."""
    n = f.ambient_dim
    _check_dim(n)
    raw = []
    for G, a in closed_cell_expansion(f).items():
        for F in face_lattice(G).all_faces():
            raw.append((F.polytope, normal_cone(G, F), a))
    return make_chain(n, raw)


def antipodal(c: ConicChain) -> ConicChain:
    """Fiberwise ``-1``: ``(F, C, m) -> (F, -C, (-1)^dim F * m)``."""
    return make_chain(
        c.ambient_dim,
        [(b, C.negate(), m * (-1) ** b.dim if _SIGN_TWIST else m) for b, C, m in c.pieces],
        projectivized=c.projectivized,
    )


def normal_cycle(f: ConstructibleFunction) -> ConicChain:
    """``cc(f)`` without the zero section, flipped like :func:`antipodal`.

    The result is flagged projectivized: cones are read up to positive
    scaling, so only their directions matter.
    """
    c = cc(f)
    flipped = antipodal(
        ConicChain(c.ambient_dim, tuple(p for p in c.pieces if p[0].dim < c.ambient_dim))
    )
    return ConicChain(c.ambient_dim, flipped.pieces, True)


def _transfer(c: ConicChain, R: PolyComplex) -> list[Piece]:
    by_base: dict[Polytope, list[tuple[Cone, Fraction]]] = {}
    for b, C, m in c.pieces:
        by_base.setdefault(b, []).append((C, m))
    out = []
    cells_by_dim: dict[int, list[Polytope]] = {}
    for cell in R.cells:
        cells_by_dim.setdefault(cell.dim, []).append(cell)
    for b, items in by_base.items():
        for cell in cells_by_dim.get(b.dim, ()):
            if cell == b or b.in_relint(cell.centroid()):
                out.extend((cell, C, m) for C, m in items)
    return out


def combine_chains(chains: Sequence[ConicChain], coeffs: Sequence) -> ConicChain:
    """``sum coeffs[i] * chains[i]`` with base cells brought to a common refinement."""
    if not chains or len(chains) != len(coeffs):
        raise ValidationError("one coefficient per chain required")
    n = chains[0].ambient_dim
    proj = chains[0].projectivized
    if any(c.ambient_dim != n or c.projectivized != proj for c in chains):
        raise ValidationError("chains are not comparable")
    coeffs = [frac(x) for x in coeffs]
    live = [(c, a) for c, a in zip(chains, coeffs) if a and c.pieces]
    if not live:
        return ConicChain(n, (), proj)
    complexes = list(dict.fromkeys(PolyComplex.from_cells(n, c.bases()) for c, _ in live))
    raw: list[Piece] = []
    if len(complexes) == 1:
        for c, a in live:
            raw.extend((b, C, a * m) for b, C, m in c.pieces)
    else:
        R = refine_common(complexes)
        for c, a in live:
            raw.extend((b, C, a * m) for b, C, m in _transfer(c, R))
    return make_chain(n, raw, projectivized=proj)


def chain_equal(c1: ConicChain, c2: ConicChain) -> bool:
    if c1.ambient_dim != c2.ambient_dim:
        raise ValidationError("chains live in different dimensions")
    if c1 == c2:
        return True
    return combine_chains([c1, c2], [1, -1]).is_zero()
