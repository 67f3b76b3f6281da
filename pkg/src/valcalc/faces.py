"""Face lattices, tangent cones and normal cones of polytopes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .config import get_config
from .errors import CapError, ValidationError
from .linalg import Vec, primitive, rank, reduce_mod, rref, vec
from .polytope import Polytope


@dataclass(frozen=True)
class Face:
    parent: Polytope
    vertex_indices: tuple[int, ...]
    dim: int

    @cached_property
    def polytope(self) -> Polytope:
        return self.parent.face_polytope(self.vertex_indices)


@dataclass(frozen=True)
class FaceLattice:
    """All nonempty faces of a polytope, graded by dimension.

    ``faces[k]`` lists the ``k``-faces (as :class:`Face`) in a deterministic
    order; ``covers[F]`` lists the ``(dim F - 1)``-faces contained in ``F``.
    """

    polytope: Polytope
    faces: tuple[tuple[Face, ...], ...]
    covers: dict

    def all_faces(self) -> list[Face]:
        return [f for level in self.faces for f in level]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.faces)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(level) for k, level in enumerate(self.faces))

    def faces_of(self, face: Face) -> list[Face]:
        """All faces of ``face`` (including itself)."""
        s = set(face.vertex_indices)
        return [g for g in self.all_faces() if set(g.vertex_indices) <= s]

    def up_covers(self, face: Face) -> list[Face]:
        if face.dim + 1 >= len(self.faces):
            return []
        s = set(face.vertex_indices)
        return [g for g in self.faces[face.dim + 1] if s <= set(g.vertex_indices)]


def _affine_dim(P: Polytope, idx: Sequence[int]) -> int:
    if len(idx) == 1:
        return 0
    v0 = P.vertices[idx[0]]
    return len(rref([tuple(a - b for a, b in zip(P.vertices[i], v0)) for i in idx[1:]])[1])


_LATTICES: dict = {}


def face_lattice(P: Polytope) -> FaceLattice:
    """Complete face lattice (every face is an intersection of facets)."""
    cap = get_config().max_lattice_dim
    if P.ambient_dim > cap:
        raise CapError("max_lattice_dim", cap, P.ambient_dim, "face lattice")
    cached = _LATTICES.get(P.vertices)
    if cached is not None:
        return cached
    r = P.dim
    top = tuple(range(len(P.vertices)))
    facet_sets = {f.vertices for f in P.facets}
    found = set(facet_sets)
    frontier = set(facet_sets)
    while frontier:
        new = set()
        for f in frontier:
            fs = set(f)
            for g in facet_sets:
                inter = tuple(sorted(fs.intersection(g)))
                if inter and inter not in found:
                    new.add(inter)
        found |= new
        frontier = new
    found.add(top)
    levels: list[list[Face]] = [[] for _ in range(r + 1)]
    for idx in found:
        k = r if idx == top else _affine_dim(P, idx)
        levels[k].append(Face(P, idx, k))
    for level in levels:
        level.sort(key=lambda f: f.vertex_indices)
    covers = {}
    for k in range(1, r + 1):
        for F in levels[k]:
            s = set(F.vertex_indices)
            covers[F] = tuple(G for G in levels[k - 1] if s.issuperset(G.vertex_indices))
    lat = FaceLattice(P, tuple(tuple(level) for level in levels), covers)
    if len(_LATTICES) > 20_000:
        _LATTICES.clear()
    _LATTICES[P.vertices] = lat
    return lat


def face_from_vertices(P: Polytope, pts: Iterable[Sequence]) -> Face:
    """Locate the face of ``P`` whose vertex set is ``pts``."""
    want = {vec(p) for p in pts}
    idx = tuple(i for i, v in enumerate(P.vertices) if v in want)
    if len(idx) != len(want):
        raise ValidationError("points are not vertices of the polytope")
    for F in face_lattice(P).all_faces():
        if F.vertex_indices == idx:
            return F
    raise ValidationError("vertex set is not a face of the polytope")


@dataclass(frozen=True)
class Cone:
    """Closed polyhedral cone ``lineality + cone(rays)``, canonical form.

    ``lineality`` is an rref basis; ``rays`` are reduced modulo it,
    primitive integer and sorted.  :func:`make_cone` does not prune
    redundant rays, so callers pass extreme rays only.
    """

    ambient_dim: int
    rays: tuple[tuple[int, ...], ...]
    lineality: tuple[Vec, ...]

    @property
    def dim(self) -> int:
        if not self.rays:
            return len(self.lineality)
        return len(self.lineality) + len(rref([tuple(Fraction(x) for x in r) for r in self.rays])[1])

    def negate(self) -> "Cone":
        return Cone(self.ambient_dim, tuple(sorted(tuple(-x for x in r) for r in self.rays)), self.lineality)

    def generators(self) -> list[Vec]:
        """Rays plus both signs of each lineality vector."""
        gens = [tuple(Fraction(x) for x in r) for r in self.rays]
        for l in self.lineality:
            gens.append(tuple(l))
            gens.append(tuple(-x for x in l))
        return gens

    def is_zero(self) -> bool:
        return not self.rays and not self.lineality


def make_cone(n: int, rays: Iterable[Sequence], lineality: Iterable[Sequence] = ()) -> Cone:
    lin = [vec(v) for v in lineality]
    lin_rows, piv = rref(lin) if lin else ([], [])
    lin_t = tuple(tuple(r) for r in lin_rows)
    out = set()
    for r in rays:
        red = reduce_mod(vec(r), lin_rows, piv)
        if any(red):
            out.add(primitive(red))
    return Cone(n, tuple(sorted(out)), lin_t)


def _face_index(P: Polytope, F) -> tuple[int, ...]:
    if isinstance(F, Face):
        if F.parent != P:
            raise ValidationError("face belongs to a different polytope")
        return F.vertex_indices
    if isinstance(F, Polytope):
        return face_from_vertices(P, F.vertices).vertex_indices
    raise TypeError("face must be a Face or a Polytope")


def _check_face(P: Polytope, idx: tuple[int, ...]) -> None:
    facets_with = [f for f in P.facets if set(idx) <= set(f.vertices)]
    common = set(range(len(P.vertices)))
    for f in facets_with:
        common &= set(f.vertices)
    if tuple(sorted(common)) != idx:
        raise ValidationError("vertex set is not a face of the polytope")


def tangent_cone(P: Polytope, F) -> Cone:
    """``T_x P`` for ``x`` in the relative interior of the face ``F``.

    Lineality is the direction space of ``F``; the extreme rays modulo it
    point from ``F`` towards the faces covering ``F``.
    """
    idx = _face_index(P, F)
    _check_face(P, idx)
    n = P.ambient_dim
    verts = [P.vertices[i] for i in idx]
    lin = [tuple(a - b for a, b in zip(v, verts[0])) for v in verts[1:]]
    if len(idx) == len(P.vertices):
        return make_cone(n, [], lin)
    c = tuple(sum(col) / len(verts) for col in zip(*verts))
    s = set(idx)
    rays = []
    # the smallest face containing F and an outside vertex v is the
    # intersection of the facets through both; it covers F iff its dimension
    # is one more, and then v - c spans the corresponding extreme ray
    fdim = 0 if len(lin) == 0 else rank(lin)
    seen = set()
    for j, v in enumerate(P.vertices):
        if j in s:
            continue
        gen = set(range(len(P.vertices)))
        for f in P.facets:
            fv = set(f.vertices)
            if s <= fv and j in fv:
                gen &= fv
        key = tuple(sorted(gen))
        if key in seen:
            continue
        seen.add(key)
        gverts = [P.vertices[i] for i in key]
        gdim = rank([tuple(a - b for a, b in zip(g, verts[0])) for g in gverts])
        if gdim == fdim + 1:
            rays.append(tuple(a - b for a, b in zip(v, c)))
    return make_cone(n, rays, lin)


def normal_cone(P: Polytope, F) -> Cone:
    """``(T_x P)^o = {y : y(v) >= 0 for v in T_x P}`` (inward normals).

    Rays are the negated relative facet normals of facets containing ``F``;
    lineality is the annihilator of the affine hull of ``P``.
    """
    idx = _face_index(P, F)
    _check_face(P, idx)
    s = set(idx)
    n = P.ambient_dim
    rays = [tuple(-x for x in f.normal) for f in P.facets if s <= set(f.vertices)]
    lin = [e for e, _ in P.structure.equations]
    return make_cone(n, rays, lin)
