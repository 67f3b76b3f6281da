from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import full_polytopes, polytopes, small_rational
from valcalc.errors import CapError, ValidationError
from valcalc.integrate import integrate, integrate_monomial
from valcalc.polynomials import MultiPoly
from valcalc.polytope import box, hull, segment, translate, volume

X2 = MultiPoly.coordinates(2)


def _riemann(f, n=400):
    """Midpoint rule over the unit triangle on an n x n grid."""
    h = 1.0 / n
    total = 0.0
    for i in range(n):
        for j in range(n - i):
            x, y = (i + 0.5) * h, (j + 0.5) * h
            if x + y < 1:
                total += f(x, y)
    return total * h * h


def test_unit_square_moments():
    Q = box([0, 0], [1, 1])
    assert integrate_monomial(Q, (0, 0)) == 1
    assert integrate_monomial(Q, (1, 0)) == F(1, 2)
    assert integrate_monomial(Q, (2, 2)) == F(1, 9)


def test_triangle_moment_matches_riemann_sum():
    T = hull([[0, 0], [1, 0], [0, 1]])
    exact = integrate_monomial(T, (1, 1))
    assert exact == F(1, 24)
    assert abs(_riemann(lambda x, y: x * y) - float(exact)) < 5e-4


def test_weighted_integral_is_linear_in_the_weight():
    T = hull([[0, 0], [2, 1], [1, 3]])
    x = MultiPoly.monomial(X2, (1, 0))
    y = MultiPoly.monomial(X2, (0, 1))
    w = x.scale(3) - y * y
    assert integrate(T, w) == 3 * integrate_monomial(T, (1, 0)) - integrate_monomial(T, (0, 2))


def test_lower_dimensional_bodies_integrate_to_zero():
    assert integrate_monomial(segment([0, 0], [1, 1]), (1, 0)) == 0


def test_caps_and_validation():
    Q = box([0, 0], [1, 1])
    with pytest.raises(CapError):
        integrate_monomial(Q, (3, 2))
    with pytest.raises(ValidationError):
        integrate_monomial(Q, (1, 0, 0))
    with pytest.raises(ValidationError):
        integrate_monomial(Q, (-1, 0))


@given(full_polytopes(2, 6))
def test_constant_weight_gives_volume(P):
    assert integrate_monomial(P, (0, 0)) == volume(P)


@given(full_polytopes(2, 6), st.tuples(small_rational, small_rational))
def test_first_moment_transforms_under_translation(P, t):
    # int_{P+t} x_1 = int_P x_1 + t_1 vol P
    assert integrate_monomial(translate(P, t), (1, 0)) == integrate_monomial(P, (1, 0)) + t[0] * volume(P)


@given(polytopes(3, 4, 7).filter(lambda P: P.dim == 3))
def test_moment_additivity_over_a_cut(P):
    from valcalc.constructible import clip

    a, b = (1, 0, 0), sum(v[0] for v in P.vertices) / len(P.vertices)
    lo, hi = clip(P, a, b, "le"), clip(P, a, b, "ge")
    for alpha in [(0, 0, 0), (1, 0, 0), (0, 1, 1), (2, 0, 1)]:
        parts = sum(integrate_monomial(Q, alpha) for Q in (lo, hi) if Q is not None)
        assert parts == integrate_monomial(P, alpha)
