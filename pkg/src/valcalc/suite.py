"""Deterministic test bodies, valuations and constructible functions.

The per-dimension test set is versioned: a given ``testset_version``
always yields the same ten bodies, so testset-relative answers (such as
``min_degree``) are reproducible.  Random generators take an explicit
``random.Random`` so callers control seeding.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .config import get_config
from .constructible import ConstructibleFunction, PolyComplex, combine, indicator, make_function, open_indicator, refine_common
from .errors import ValidationError
from .polynomials import MultiPoly
from .polytope import Polytope, box, hull, minkowski_sum, segment, translate
from .valuations import ValuationExpr, combine_valuations, euler_valuation, make_valuation, mixed_valuation, volume_valuation

TESTSET_VERSIONS = (1,)


def _rat(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 2) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_point(rng: random.Random, n: int, **kw) -> tuple[Fraction, ...]:
    return tuple(_rat(rng, **kw) for _ in range(n))


def random_segment(rng: random.Random, n: int) -> Polytope:
    while True:
        a = random_point(rng, n, lo=-2, hi=2)
        b = random_point(rng, n, lo=-2, hi=2)
        if a != b:
            return segment(a, b)


def random_polytope(rng: random.Random, n: int, dim: int | None = None, npts: int | None = None) -> Polytope:
    """Hull of random rational points, optionally of a prescribed dimension."""
    if dim is None:
        dim = n
    if not 0 <= dim <= n:
        raise ValidationError(f"dimension {dim} outside 0..{n}")
    if npts is None:
        npts = dim + 1 + rng.randint(0, 2)
    npts = max(npts, dim + 1)
    while True:
        origin = random_point(rng, n)
        if dim == 0:
            return hull([origin])
        dirs = [random_point(rng, n, lo=-2, hi=2) for _ in range(dim)]
        pts = []
        for _ in range(npts):
            cs = [_rat(rng, 0, 2) for _ in range(dim)]
            pts.append(tuple(o + sum(c * d[j] for c, d in zip(cs, dirs)) for j, o in enumerate(origin)))
        P = hull(pts)
        if P.dim == dim:
            return P


def testset(n: int, version: int | None = None) -> list[Polytope]:
    """Ten full-dimensional bodies: boxes, simplices, and their sums with segments."""
    if version is None:
        version = get_config().testset_version
    if version not in TESTSET_VERSIONS:
        raise ValidationError(f"unknown test set version {version}")
    rng = random.Random(f"valcalc-testset-v{version}-n{n}")
    bodies: list[Polytope] = []
    bodies.append(box([0] * n, [1] * n))
    bodies.append(box([0] * n, [Fraction(i + 2, 2) for i in range(n)]))
    std = [tuple([0] * n)] + [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    bodies.append(hull(std))
    skew = [tuple([0] * n)] + [tuple(Fraction(i + j + 1, 2) if i >= j else 0 for j in range(n)) for i in range(n)]
    bodies.append(hull(skew))
    bases = list(bodies)
    while len(bodies) < 10:
        base = bases[len(bodies) % len(bases)]
        s1, s2 = random_segment(rng, n), random_segment(rng, n)
        bodies.append(minkowski_sum([base, s1, s2]))
    return bodies


def heldout_bodies(n: int, count: int, rng: random.Random) -> list[Polytope]:
    return [random_polytope(rng, n) for _ in range(count)]


# -------------------------------------------------------------- valuations


def unit_segments(n: int) -> list[Polytope]:
    return [segment([0] * n, [1 if i == j else 0 for j in range(n)]) for i in range(n)]


def suite_valuations(n: int = 2) -> dict[str, ValuationExpr]:
    """Named translation-invariant valuations used by the pairing checks.

    For ``n = 2`` the six entries span a five-dimensional space because
    ``phi_{S1+S2} = phi_{S1} + phi_{S2}``; the pairing-rank check relies on
    that dependency being detected.
    """
    if n != 2:
        raise ValidationError("the named valuation suite is defined for n = 2")
    S1 = segment([0, 0], [1, 0])
    S2 = segment([0, 0], [1, 2])
    T = hull([[0, 0], [2, 1], [1, 3]])
    return {
        "chi": euler_valuation(2),
        "vol": volume_valuation(2),
        "phi_S1": mixed_valuation([S1]),
        "phi_S2": mixed_valuation([S2]),
        "phi_S1+S2": mixed_valuation([minkowski_sum([S1, S2])]),
        "phi_T": mixed_valuation([T]),
    }


def suite_functions(n: int = 2) -> dict[str, ConstructibleFunction]:
    if n != 2:
        raise ValidationError("the named function suite is defined for n = 2")
    return {
        "pt": indicator(hull([[0, 0]])),
        "seg_x": indicator(segment([0, 0], [1, 0])),
        "seg_y": indicator(segment([0, 0], [0, 1])),
        "seg_diag": indicator(segment([0, 0], [1, 1])),
        "square": indicator(box([0, 0], [1, 1])),
        "open_triangle": open_indicator(hull([[0, 0], [2, 0], [0, 1]])),
    }


def homogeneous_suite(n: int, rng: random.Random, per_degree: int = 2) -> dict[int, list[ValuationExpr]]:
    """Translation-invariant valuations sorted by homogeneity degree.

    A mixed term with ``k`` bodies and constant weight is homogeneous of
    degree ``n - k``.
    """
    out: dict[int, list[ValuationExpr]] = {0: [euler_valuation(n)], n: [volume_valuation(n)]}
    for k in range(1, n):
        out[n - k] = [mixed_valuation([random_polytope(rng, n) for _ in range(k)]) for _ in range(per_degree)]
    return out


def random_degree_one(rng: random.Random, nterms: int = 2) -> ValuationExpr:
    """Random combination of ``K -> d/dl vol(K + l A)`` in the plane."""
    vals = [mixed_valuation([random_polytope(rng, 2, dim=rng.choice((1, 2)), npts=3)]) for _ in range(nterms)]
    coeffs = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2])) for _ in range(nterms)]
    return combine_valuations(vals, coeffs)


def random_weight(rng: random.Random, n: int, degree: int) -> MultiPoly:
    coords = MultiPoly.coordinates(n)
    terms = {}
    for _ in range(degree + 1):
        e = [0] * n
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = Fraction(rng.randint(-3, 3) or 1, rng.choice([1, 2]))
    w = MultiPoly.from_dict(coords, terms)
    return w if not w.is_zero() else MultiPoly.constant(coords, 1)


def random_valuation(rng: random.Random, n: int, *, max_terms: int = 2, weighted: bool = True) -> ValuationExpr:
    """Random expression; bodies per term stay below ``n`` to keep fits small."""
    raw = []
    for _ in range(rng.randint(1, max_terms)):
        w = random_weight(rng, n, rng.randint(0, 1)) if weighted and rng.random() < 0.5 else None
        k = rng.randint(0, min(n, 2))
        bodies = [random_polytope(rng, n, dim=rng.randint(1, n), npts=3) for _ in range(k)]
        raw.append((Fraction(rng.randint(-3, 3) or 1, rng.choice([1, 2])), w, bodies))
    return make_valuation(n, raw)


def random_complex(rng: random.Random, n: int, pieces: int = 2) -> PolyComplex:
    """Common refinement of a few random full-dimensional polytopes."""
    parts = [PolyComplex.from_cells(n, [random_polytope(rng, n, npts=n + 1 + rng.randint(0, 1))]) for _ in range(pieces)]
    return refine_common(parts)


def random_function(rng: random.Random, n: int, pieces: int = 2) -> ConstructibleFunction:
    """Random rational combination of closed and open polytope indicators."""
    fs, cs = [], []
    for _ in range(pieces):
        P = random_polytope(rng, n, dim=rng.randint(0, n))
        fs.append(indicator(P) if rng.random() < 0.6 else open_indicator(P))
        cs.append(Fraction(rng.randint(-3, 3) or 1, rng.choice([1, 2])))
    return combine(fs, cs)


def random_cell_function(rng: random.Random, cx: PolyComplex) -> ConstructibleFunction:
    """Random rational coefficients on a random subset of the open cells of ``cx``."""
    coeffs = {c: Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for c in cx.cells if rng.random() < 0.5}
    return make_function(cx.ambient_dim, coeffs)


def shifted(P: Polytope, t: Sequence) -> Polytope:
    return translate(P, t)
