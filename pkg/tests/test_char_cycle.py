import random
from fractions import Fraction as F

import pytest

from valcalc.char_cycle import (
    antipodal,
    cc,
    cc_polytope,
    chain_equal,
    combine_chains,
    make_chain,
    normal_cycle,
    sign_twist,
)
from valcalc.constructible import combine, indicator, open_indicator, verdier_dual, zero_function
from valcalc.errors import InvariantError
from valcalc.faces import make_cone
from valcalc.polytope import box, point, segment
from valcalc.suite import random_complex, random_function, random_polytope

I01 = segment([0], [1])
P0, P1 = point([0]), point([1])
ZERO1 = make_cone(1, [])
UP, DOWN = make_cone(1, [(1,)]), make_cone(1, [(-1,)])


def _pieces(c):
    return {(b, C): m for b, C, m in c.pieces}


def _check_lagrangian(c):
    for b, C, _ in c.pieces:
        assert b.dim + C.dim == c.ambient_dim
        for g in C.generators():
            for v in b.vertices[1:]:
                d = [x - y for x, y in zip(v, b.vertices[0])]
                assert sum(p * q for p, q in zip(g, d)) == 0


def test_cc_of_unit_interval():
    assert _pieces(cc_polytope(I01)) == {(I01, ZERO1): 1, (P0, UP): 1, (P1, DOWN): 1}


def test_cc_of_point_is_full_fiber():
    assert _pieces(cc_polytope(P0)) == {(P0, UP): 1, (P0, DOWN): 1}
    Q = point([1, 2])
    c = cc_polytope(Q)
    assert len(c.pieces) == 4 and all(m == 1 and C.dim == 2 for _, C, m in c.pieces)


def test_cc_of_unit_square():
    Q = box([0, 0], [1, 1])
    c = cc_polytope(Q)
    assert len(c.pieces) == 9
    assert all(m == 1 for _, _, m in c.pieces)
    dims = sorted((b.dim, C.dim) for b, C, _ in c.pieces)
    assert dims == [(0, 2)] * 4 + [(1, 1)] * 4 + [(2, 0)]
    corner = {C for b, C, _ in c.pieces if b == point([0, 0])}
    assert corner == {make_cone(2, [(1, 0), (0, 1)])}


def test_cc_of_open_interval():
    assert _pieces(cc(open_indicator(I01))) == {(I01, ZERO1): 1, (P0, DOWN): -1, (P1, UP): -1}


def test_cc_zero_and_point():
    assert cc(zero_function(2)).is_zero()
    assert _pieces(cc(indicator(P0))) == {(P0, UP): 1, (P0, DOWN): 1}


def test_antipodal_examples():
    lhs = antipodal(cc(indicator(I01)))
    rhs = cc(verdier_dual(indicator(I01)))
    assert lhs == rhs
    assert _pieces(lhs) == {(I01, ZERO1): -1, (P0, DOWN): 1, (P1, UP): 1}
    pt = cc(indicator(P0))
    assert antipodal(pt) == pt


def test_untwisted_flip_breaks_duality():
    with sign_twist(False):
        assert not chain_equal(antipodal(cc(indicator(I01))), cc(verdier_dual(indicator(I01))))


def test_normal_cycle_examples():
    N = normal_cycle(indicator(I01))
    assert N.projectivized
    assert _pieces(N) == {(P0, DOWN): 1, (P1, UP): 1}
    assert _pieces(normal_cycle(indicator(P0))) == {(P0, DOWN): 1, (P0, UP): 1}
    assert normal_cycle(zero_function(1)).is_zero()


def test_chain_equal_examples():
    c = cc_polytope(box([0, 0], [1, 1]))
    assert chain_equal(c, c)
    assert not chain_equal(c, c.scale(2))
    assert (c - c).is_zero()


def test_linearity():
    rng = random.Random(13)
    for i in range(25):
        n = 1 + i % 2
        f, g = random_function(rng, n), random_function(rng, n)
        a, b = F(rng.randint(-3, 3), 2), F(rng.randint(-3, 3) or 1, 3)
        lhs = cc(combine([f, g], [a, b]))
        rhs = combine_chains([cc(f), cc(g)], [a, b])
        assert chain_equal(lhs, rhs)
        _check_lagrangian(lhs)


def test_verdier_compatibility_on_cell_bases():
    rng = random.Random(17)
    for n in (1, 2):
        for _ in range(3):
            cx = random_complex(rng, n)
            for cell in cx.cells:
                for f in (open_indicator(cell), indicator(cell)):
                    assert chain_equal(cc(verdier_dual(f)), antipodal(cc(f)))


def test_antipodal_is_an_involution():
    rng = random.Random(19)
    for i in range(10):
        c = cc(random_function(rng, 1 + i % 2))
        assert antipodal(antipodal(c)) == c


def test_zero_section_multiplicity_of_full_dimensional_body():
    rng = random.Random(23)
    for n in (1, 2, 3):
        P = random_polytope(rng, n)
        zs = [m for b, C, m in cc(indicator(P)).pieces if C.is_zero()]
        assert zs == [1]


def test_fiber_is_resolved_to_a_canonical_fan():
    # the half-lines through a point in R^1 in two presentations
    full = make_cone(1, [], [(1,)])
    a = make_chain(1, [(P0, full, 1)])
    b = make_chain(1, [(P0, UP, 1), (P0, DOWN, 1)])
    assert a == b


def test_non_lagrangian_piece_is_rejected():
    with pytest.raises(InvariantError):
        make_chain(2, [(segment([0, 0], [1, 0]), make_cone(2, [(1, 0)]), 1)])


def test_combining_projectivized_with_plain_chains_is_rejected():
    from valcalc.errors import ValidationError

    with pytest.raises(ValidationError):
        combine_chains([normal_cycle(indicator(I01)), cc(indicator(I01))], [1, 1])
