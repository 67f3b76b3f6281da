import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from strategies import full_polytopes, points, polytopes, positive_rational, small_rational
from valcalc.config import Config, using_config
from valcalc.errors import CapError, ValidationError
from valcalc.polytope import (
    Polytope,
    affine_image,
    block_embed,
    box,
    diagonal_embed,
    dilate,
    hull,
    minkowski_sum,
    point,
    reflect,
    segment,
    support_value,
    translate,
    volume,
)


def _lp_extreme(pts, i):
    """Float LP oracle: is pts[i] outside the hull of the other points?"""
    others = [p for j, p in enumerate(pts) if j != i and p != pts[i]]
    if not others:
        return True
    n = len(pts[0])
    A_eq = [[float(p[c]) for p in others] for c in range(n)] + [[1.0] * len(others)]
    b_eq = [float(x) for x in pts[i]] + [1.0]
    res = linprog([0.0] * len(others), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * len(others), method="highs")
    return res.status != 0


def test_hull_drops_interior_point():
    P = hull([[0, 0], [1, 0], [0, 1], [F(1, 2), F(1, 4)]])
    assert P.vertices == ((0, 0), (0, 1), (1, 0))
    assert P.dim == 2


def test_hull_of_single_point():
    P = hull([[0, 0]])
    assert P.dim == 0
    assert P.vertices == ((0, 0),)


def test_hull_matches_lp_oracle():
    rng = random.Random(7)
    pts = [tuple(F(rng.randint(0, 12), 12) for _ in range(3)) for _ in range(20)]
    P = hull(pts)
    uniq = sorted(set(pts))
    expected = {p for i, p in enumerate(uniq) if _lp_extreme(uniq, i)}
    assert set(P.vertices) == expected


def test_hull_errors():
    with pytest.raises(ValidationError):
        hull([])
    with pytest.raises(ValidationError):
        hull([[0, 0], [1, 0, 0]])
    with pytest.raises(CapError) as exc:
        hull([[0] * 7])
    assert "max_dim=6" in str(exc.value)


def test_hull_respects_configured_cap():
    with using_config(Config(max_dim=2)):
        with pytest.raises(CapError):
            hull([[0, 0, 0]])


def test_raw_polytope_with_non_extreme_points_is_rejected():
    with pytest.raises(ValidationError):
        Polytope(((0,), (F(1, 2),), (1,))).structure


def test_lower_dimensional_hull():
    P = hull([[0, 0, 0], [1, 1, 1], [2, 2, 2], [F(1, 2)] * 3])
    assert P.dim == 1
    assert P.vertices == ((0, 0, 0), (2, 2, 2))
    T = hull([[0, 0, 1], [1, 0, 1], [0, 1, 1], [F(1, 3), F(1, 3), 1]])
    assert T.dim == 2 and len(T.vertices) == 3


@given(points(3, 1, 8))
def test_hull_idempotent(pts):
    P = hull(pts)
    assert hull(P.vertices) == P


@given(points(2, 1, 9))
def test_hull_contains_inputs(pts):
    P = hull(pts)
    assert all(P.contains(p) for p in pts)


def test_volume_examples():
    assert volume(hull([[0, 0], [1, 0], [0, 1]])) == F(1, 2)
    assert volume(segment([0, 0], [1, 1])) == 0
    hexagon = minkowski_sum([box([0, 0], [1, 1]), segment([0, 0], [1, 1])])
    assert len(hexagon.vertices) == 6
    assert volume(hexagon) == 3


def _shoelace(P):
    import math

    cx = sum(v[0] for v in P.vertices) / len(P.vertices)
    cy = sum(v[1] for v in P.vertices) / len(P.vertices)
    ring = sorted(P.vertices, key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
    s = sum(a[0] * b[1] - b[0] * a[1] for a, b in zip(ring, ring[1:] + ring[:1]))
    return abs(F(s)) / 2


@given(full_polytopes(2, 8))
def test_volume_matches_shoelace(P):
    assert volume(P) == _shoelace(P)


@given(full_polytopes(3, 7), st.integers(0, 1000))
def test_volume_independent_of_triangulation(P, seed):
    again = hull(P.vertices, order_seed=seed)
    assert again == P
    from valcalc.polytope import _compute_structure

    order = list(range(len(P.vertices)))
    random.Random(seed).shuffle(order)
    _, s = _compute_structure(list(P.vertices), order)
    from valcalc.linalg import bareiss_det
    from math import factorial

    tot = 0
    for simp in s.simplices:
        p0 = s.chart_points[simp[0]]
        tot += abs(bareiss_det([[a - b for a, b in zip(s.chart_points[i], p0)] for i in simp[1:]]))
    assert F(tot, factorial(3) * s.scale**3) == volume(P)


@given(full_polytopes(3, 6), st.integers(1, 3))
def test_volume_scales_with_dilation(P, lam):
    assert volume(minkowski_sum([P], [lam])) == lam**3 * volume(P)


def test_minkowski_sum_examples():
    P = box([0, 0], [1, 1])
    assert minkowski_sum([point([1, 2])], [3]) == point([3, 6])
    assert minkowski_sum([P, segment([5, 5], [6, 7])], [1, 0]) == P
    with pytest.raises(ValidationError):
        minkowski_sum([P], [-1])
    with pytest.raises(ValidationError):
        minkowski_sum([P, segment([0], [1])])


@given(polytopes(2), polytopes(2), st.tuples(small_rational, small_rational))
def test_support_value_is_additive(P, Q, y):
    assert support_value(minkowski_sum([P, Q]), y) == support_value(P, y) + support_value(Q, y)


def test_support_value_examples():
    assert support_value(box([0, 0], [1, 1]), (1, 1)) == 2
    assert support_value(point([2, 3]), (F(1, 2), -1)) == -2


@given(polytopes(3), st.tuples(small_rational, small_rational, small_rational))
def test_reflection_flips_support(P, y):
    assert support_value(reflect(P), y) == support_value(P, tuple(-x for x in y))


def test_affine_maps():
    assert reflect(segment([0], [1])) == segment([-1], [0])
    D = diagonal_embed(box([0, 0], [1, 1]))
    assert D.ambient_dim == 4 and D.dim == 2
    assert all(v[:2] == v[2:] for v in D.vertices)
    B = block_embed(segment([0, 0], [1, 1]), 1, 3)
    assert B.vertices == ((0, 0, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0))
    assert translate(point([1, 1]), [1, -1]) == point([2, 0])
    assert dilate(box([0], [1]), 0) == point([0])
    shear = affine_image(box([0, 0], [1, 1]), [[1, 1], [0, 1]], [1, 0])
    assert volume(shear) == 1
    with pytest.raises(CapError):
        diagonal_embed(box([0] * 4, [1] * 4))


@given(full_polytopes(2, 6), positive_rational)
def test_dilate_matches_minkowski_scaling(P, lam):
    assert dilate(P, lam) == minkowski_sum([P], [lam])
