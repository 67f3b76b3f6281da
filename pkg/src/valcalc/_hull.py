"""Exact incremental (beneath-beyond) convex hull on integer points.

Works in full dimension ``d``: callers project lower-dimensional inputs to
their affine hull first.  The boundary is kept as a simplicial complex of
oriented facets; coplanar simplices are merged afterwards into true facets.
"""

from __future__ import annotations

from functools import reduce
from math import gcd
from typing import Sequence

import numpy as np

from .errors import InvariantError
from .linalg import int_kernel_vector, int_rank

IPoint = tuple[int, ...]


def _normal(pts: Sequence[IPoint]) -> tuple[int, ...]:
    """Primitive integer normal of the hyperplane through ``d`` points in R^d."""
    p0 = pts[0]
    d = len(p0)
    if d == 1:
        return (1,)
    rows = [[x - y for x, y in zip(p, p0)] for p in pts[1:]]
    a = int_kernel_vector(rows, d)
    if a is None:
        raise InvariantError("degenerate facet simplex")
    return a


def _pencil(a1, b1, a2, b2, p) -> tuple[tuple[int, ...], int]:
    """Hyperplane through ``p`` in the pencil spanned by two hyperplanes.

    Both input hyperplanes contain the same ridge, so every member of their
    pencil does too; this replaces a kernel computation by ``O(d)`` work.
    The orientation is fixed later by the caller.
    """
    s1 = sum(x * y for x, y in zip(a1, p)) - b1
    s2 = sum(x * y for x, y in zip(a2, p)) - b2
    a = [s2 * x - s1 * y for x, y in zip(a1, a2)]
    b = s2 * b1 - s1 * b2
    g = reduce(gcd, a, abs(b))
    if g > 1:
        a = [x // g for x in a]
        b //= g
    return tuple(a), b


def _initial_simplex(points: Sequence[IPoint], d: int) -> list[int]:
    chosen = [0]
    basis: list[list[int]] = []  # echelon rows of differences (integer, fraction-free)
    pivots: list[int] = []
    p0 = points[0]
    for i in range(1, len(points)):
        v = [x - y for x, y in zip(points[i], p0)]
        for row, pc in zip(basis, pivots):
            if v[pc]:
                f, g = v[pc], row[pc]
                v = [g * x - f * y for x, y in zip(v, row)]
        nz = next((c for c in range(d) if v[c]), None)
        if nz is None:
            continue
        basis.append(v)
        pivots.append(nz)
        chosen.append(i)
        if len(chosen) == d + 1:
            return chosen
    raise InvariantError("points are not full-dimensional")


# int64 dot products are exact while d * max|a| * max|p| + max|b| stays below this
_INT64_SAFE = 1 << 62


class SimplicialHull:
    """Triangulated boundary of conv(points), points integer and full-dim.

    Attributes
    ----------
    facets : dict
        ``fid -> (vertex index tuple, normal, offset)`` with ``normal . x <= offset``
        on the hull and equality on the facet simplex.

    The visibility scan is a numpy int64 matrix-vector product as long as a
    magnitude bound proves it exact; otherwise it falls back to Python ints.
    """

    def __init__(self, points: Sequence[IPoint], order: Sequence[int] | None = None):
        self.points = list(points)
        d = len(self.points[0])
        self.d = d
        idx = list(order) if order is not None else list(range(len(self.points)))
        pts = [self.points[i] for i in idx]
        init = [idx[i] for i in _initial_simplex(pts, d)]
        self.apex = init[0]
        # scaled interior point: (d+1) * centroid of the initial simplex
        self._inner = tuple(sum(self.points[i][c] for i in init) for c in range(d))
        self.facets: dict[int, tuple[tuple[int, ...], tuple[int, ...], int]] = {}
        self._ridges: dict[tuple[int, ...], list[int]] = {}
        self._next = 0
        self._max_p = max((abs(x) for p in self.points for x in p), default=0)
        self._fast = d * self._max_p < _INT64_SAFE
        self._max_a = 0
        self._max_b = 0
        if self._fast:
            self._P = np.array(self.points, dtype=np.int64)
            self._A = np.zeros((64, d), dtype=np.int64)
            self._B = np.zeros(64, dtype=np.int64)
            self._alive = np.zeros(64, dtype=bool)
        for drop in range(d + 1):
            self._add_facet(tuple(sorted(init[:drop] + init[drop + 1:])))
        seen = set(init)
        for i in idx:
            if i not in seen:
                self._insert(i)

    def _store(self, fid: int, a: tuple[int, ...], b: int) -> None:
        self._max_a = max(self._max_a, max(abs(x) for x in a))
        self._max_b = max(self._max_b, abs(b))
        if self.d * self._max_a * self._max_p + self._max_b >= _INT64_SAFE:
            self._fast = False
            return
        if fid >= len(self._B):
            grow = len(self._B)
            self._A = np.vstack([self._A, np.zeros((grow, self.d), dtype=np.int64)])
            self._B = np.concatenate([self._B, np.zeros(grow, dtype=np.int64)])
            self._alive = np.concatenate([self._alive, np.zeros(grow, dtype=bool)])
        self._A[fid] = a
        self._B[fid] = b
        self._alive[fid] = True

    def _add_facet(self, verts: tuple[int, ...], plane: tuple | None = None) -> None:
        if plane is None:
            pts = [self.points[i] for i in verts]
            a = _normal(pts)
            b = sum(x * y for x, y in zip(a, pts[0]))
        else:
            a, b = plane
        d = self.d
        if sum(x * y for x, y in zip(a, self._inner)) > (d + 1) * b:
            a = tuple(-x for x in a)
            b = -b
        fid = self._next
        self._next += 1
        self.facets[fid] = (verts, a, b)
        if self._fast:
            self._store(fid, a, b)
        for drop in range(len(verts)):
            ridge = verts[:drop] + verts[drop + 1:]
            self._ridges.setdefault(ridge, []).append(fid)

    def _remove_facet(self, fid: int) -> None:
        verts, _, _ = self.facets.pop(fid)
        if self._fast:
            self._alive[fid] = False
        for drop in range(len(verts)):
            ridge = verts[:drop] + verts[drop + 1:]
            lst = self._ridges[ridge]
            lst.remove(fid)
            if not lst:
                del self._ridges[ridge]

    def _visible(self, i: int) -> set[int]:
        if self._fast:
            k = self._next
            above = (self._A[:k] @ self._P[i] > self._B[:k]) & self._alive[:k]
            return set(np.flatnonzero(above).tolist())
        p = self.points[i]
        return {fid for fid, (_, a, b) in self.facets.items() if sum(x * y for x, y in zip(a, p)) > b}

    def _insert(self, i: int) -> None:
        p = self.points[i]
        visible = self._visible(i)
        if not visible:
            return
        horizon = []
        for fid in visible:
            verts, a1, b1 = self.facets[fid]
            for drop in range(len(verts)):
                ridge = verts[:drop] + verts[drop + 1:]
                other = [g for g in self._ridges[ridge] if g != fid]
                if len(other) != 1:
                    raise InvariantError("hull boundary is not a closed pseudomanifold")
                if other[0] not in visible:
                    _, a2, b2 = self.facets[other[0]]
                    horizon.append((ridge, _pencil(a1, b1, a2, b2, p)))
        for fid in visible:
            self._remove_facet(fid)
        for ridge, plane in horizon:
            self._add_facet(tuple(sorted(ridge + (i,))), plane)


def full_dim_hull(points: Sequence[IPoint], order: Sequence[int] | None = None):
    """Extreme points and true facets of a full-dimensional integer point set.

    Returns ``(extreme, facets, simplicial, apex)`` where ``extreme`` is the sorted
    list of indices of extreme points, ``facets`` a list of
    ``(normal, offset, vertex index tuple)`` for the merged facets,
    ``simplicial`` the boundary simplices as ``(index tuple, normal, offset)``
    and ``apex`` the first inserted point, used for cone triangulation.
    """
    h = SimplicialHull(points, order)
    d = h.d
    groups: dict[tuple[tuple[int, ...], int], set[int]] = {}
    for verts, a, b in h.facets.values():
        groups.setdefault((a, b), set()).update(verts)
    candidates = sorted(set().union(*groups.values()))
    on: dict[int, list[tuple[int, ...]]] = {i: [] for i in candidates}
    for (a, b) in groups:
        for i in candidates:
            if sum(x * y for x, y in zip(a, points[i])) == b:
                on[i].append(a)
    extreme = [i for i in candidates if int_rank(on[i]) == d]
    facets = []
    for (a, b) in sorted(groups):
        verts = tuple(i for i in extreme if sum(x * y for x, y in zip(a, points[i])) == b)
        facets.append((a, b, verts))
    simplices = list(h.facets.values())
    return extreme, facets, simplices, h.apex
