from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valcalc.errors import ValidationError
from valcalc.polynomials import MultiPoly, mixed_derivative_at_zero

V = ("a", "b")
coeffs = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.builds(F, st.integers(-5, 5), st.integers(1, 4)),
    max_size=6,
)


def test_zero_coefficients_are_dropped():
    p = MultiPoly.from_dict(V, {(1, 0): 0, (0, 1): 2})
    assert p.terms == (((0, 1), 2),)
    assert MultiPoly.from_dict(V, {}).is_zero()


def test_arithmetic_and_evaluation():
    a = MultiPoly.monomial(V, (1, 0))
    b = MultiPoly.monomial(V, (0, 1))
    p = (a + b) * (a + b)
    assert p.as_dict() == {(2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert p(3, 2) == 25
    assert p((F(1, 2), F(1, 2))) == 1
    assert p.degree() == 2
    assert (p - p).is_zero()
    assert MultiPoly.constant(V, 7).is_constant()


def test_derivative():
    a = MultiPoly.monomial(V, (3, 1), 2)
    assert a.derivative(0).as_dict() == {(2, 1): 6}
    assert a.derivative(0, 2).as_dict() == {(1, 1): 12}
    assert a.derivative(1, 2).is_zero()


def test_mixed_derivative_examples():
    a = MultiPoly.monomial(V, (1, 0))
    b = MultiPoly.monomial(V, (0, 1))
    assert mixed_derivative_at_zero((a + b) * (a + b), [0, 1]) == 2
    assert mixed_derivative_at_zero(a * a, [0]) == 0
    with pytest.raises(ValidationError):
        mixed_derivative_at_zero(a, [0, 0])


def test_mismatched_variables_rejected():
    with pytest.raises(ValidationError):
        MultiPoly.constant(V) + MultiPoly.constant(("x",))


@given(coeffs, coeffs, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_ring_homomorphism_to_values(d1, d2, pt):
    p, q = MultiPoly.from_dict(V, d1), MultiPoly.from_dict(V, d2)
    assert (p + q)(pt) == p(pt) + q(pt)
    assert (p * q)(pt) == p(pt) * q(pt)


@given(coeffs)
def test_mixed_derivative_is_the_derivative_at_zero(d):
    p = MultiPoly.from_dict(V, d)
    assert mixed_derivative_at_zero(p, [0, 1]) == p.derivative(0).derivative(1)(0, 0)
    assert mixed_derivative_at_zero(p, [1]) == p.derivative(1)(0, 0)


def test_embed():
    p = MultiPoly.monomial(("x",), (2,), 3)
    q = p.embed(("u", "v", "w"), [2])
    assert q.as_dict() == {(0, 0, 2): 3}
