"""Intrinsic volumes in floating point.

``mu_k(P) = sum over k-faces F of vol_k(F) * gamma(F, P)``, where the
external angle ``gamma`` is the normalised solid angle of the normal cone
of ``F`` inside the orthogonal complement of ``F``.  External angles are
irrational in general, which is why this is the only module that returns
floats.
"""

from __future__ import annotations

import math

import numpy as np

from .config import get_config
from .errors import CapError, ValidationError
from .faces import face_lattice, normal_cone
from .polytope import Polytope, relative_volume_chart


def _euclidean_volume(F: Polytope) -> float:
    s = F.structure
    if s.dim == 0:
        return 1.0
    B = np.array([[float(x) for x in row] for row in s.basis])
    return float(relative_volume_chart(F)) * math.sqrt(np.linalg.det(B @ B.T))


def _orth_complement(rows: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis (as rows) of the complement of the row space."""
    if rows.size == 0:
        return np.eye(n)
    _, sv, vt = np.linalg.svd(rows)
    r = int((sv > 1e-12 * max(1.0, sv[0])).sum())
    return vt[r:]


def _solid_angle_fraction(rays: np.ndarray) -> float:
    """Normalised angle of a pointed full-dimensional cone in ``R^d``, ``d <= 3``."""
    d = rays.shape[1]
    if d == 0:
        return 1.0
    if d == 1:
        return 0.5
    u = rays / np.linalg.norm(rays, axis=1)[:, None]
    if d == 2:
        if len(u) != 2:
            raise ValidationError("pointed planar cone must have two extreme rays")
        return math.acos(max(-1.0, min(1.0, float(u[0] @ u[1])))) / (2 * math.pi)
    if d != 3:
        raise CapError("max_complex_dim", 3, d, "external angle")
    # order rays cyclically around their mean direction, then fan-triangulate
    c = u.mean(axis=0)
    c /= np.linalg.norm(c)
    e1 = u[0] - (u[0] @ c) * c
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    order = np.argsort([math.atan2(float(v @ e2), float(v @ e1)) for v in u])
    u = u[order]
    total = 0.0
    for i in range(1, len(u) - 1):
        a, b, cc = u[0], u[i], u[i + 1]
        num = abs(float(a @ np.cross(b, cc)))
        den = 1.0 + float(a @ b) + float(b @ cc) + float(cc @ a)
        total += 2.0 * math.atan2(num, den)
    return total / (4 * math.pi)


def external_angle(P: Polytope, F) -> float:
    C = normal_cone(P, F)
    n = P.ambient_dim
    face = F.polytope if hasattr(F, "polytope") else F
    dirs = np.array([[float(x) for x in row] for row in face.structure.basis]).reshape(-1, n)
    lin = np.array([[float(x) for x in row] for row in C.lineality]).reshape(-1, n)
    basis = _orth_complement(np.vstack([dirs, lin]), n)
    if basis.shape[0] == 0:
        return 1.0
    rays = np.array([[float(x) for x in r] for r in C.rays]).reshape(-1, n) @ basis.T
    return _solid_angle_fraction(rays)


def intrinsic_volume(P: Polytope, k: int) -> float:
    n = P.ambient_dim
    cap = get_config().max_complex_dim
    if n > cap:
        raise CapError("max_complex_dim", cap, n, "intrinsic volumes")
    if not 0 <= k <= n:
        raise ValidationError(f"degree {k} outside 0..{n}")
    if k > P.dim:
        return 0.0
    lat = face_lattice(P)
    return sum(_euclidean_volume(F.polytope) * external_angle(P, F) for F in lat.faces[k])
