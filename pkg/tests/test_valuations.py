import random
from fractions import Fraction as F

import pytest

from valcalc.constructible import (
    boundary_indicator,
    combine,
    euler_integral,
    indicator,
    open_indicator,
    verdier_dual,
)
from valcalc.errors import CapError, InvariantError, ValidationError
from valcalc.polynomials import MultiPoly
from valcalc.polytope import box, dilate, hull, point, segment, volume
from valcalc.suite import random_function, random_polytope, random_valuation, suite_valuations
from valcalc.suite import testset as bodies_for
from valcalc.valuations import (
    combine_valuations,
    component_eval,
    components,
    euler_valuation,
    evaluate,
    evaluate_constructible,
    homogeneous_component,
    integrate_constructible,
    make_valuation,
    min_degree,
    mixed_valuation,
    pairing_matrix,
    poincare_pair,
    product_components,
    product_eval,
    sigma_boundary,
    sigma_boundary_eval,
    sigma_reflect,
    unit_box,
    volume_valuation,
    zero_valuation,
)

SQ = box([0, 0], [1, 1])
TRI = hull([[0, 0], [1, 0], [0, 1]])
PHI_Q = mixed_valuation([SQ])


def test_volume_valuation():
    assert evaluate(volume_valuation(2), TRI) == F(1, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_euler_valuation_is_one_on_nonempty_bodies(n):
    rng = random.Random(n)
    for d in range(5):
        K = random_polytope(rng, n, dim=d % (n + 1))
        assert evaluate(euler_valuation(n), K) == 1


def test_mixed_term_example():
    assert evaluate(PHI_Q, SQ) == 2


def test_too_many_bodies_rejected():
    with pytest.raises(ValidationError):
        make_valuation(1, [(1, None, [segment([0], [1])] * 2)])
    w = MultiPoly.monomial(MultiPoly.coordinates(1), (1,))
    make_valuation(1, [(1, w, [segment([0], [1])] * 2)])


def test_terms_merge_and_cancel():
    phi = combine_valuations([PHI_Q, PHI_Q], [1, -1])
    assert phi.is_zero() and phi == zero_valuation(2)
    assert evaluate(phi, TRI) == 0


def test_weighted_valuation_is_not_translation_invariant():
    x = MultiPoly.monomial(MultiPoly.coordinates(1), (1,))
    phi = volume_valuation(1, x)
    assert evaluate(phi, segment([0], [1])) == F(1, 2)
    assert evaluate(phi, segment([1], [2])) == F(3, 2)


def test_evaluate_constructible_examples():
    rng = random.Random(2)
    chi1 = euler_valuation(1)
    assert evaluate_constructible(chi1, open_indicator(segment([0], [1]))) == -1
    for _ in range(5):
        P = random_polytope(rng, 2, dim=rng.randint(0, 2))
        phi = random_valuation(rng, 2)
        assert evaluate_constructible(phi, indicator(P)) == evaluate(phi, P)
    for _ in range(25):
        f = random_function(rng, 2)
        assert evaluate_constructible(euler_valuation(2), f) == euler_integral(f)


def test_unit_law():
    rng = random.Random(3)
    for _ in range(3):
        phi = random_valuation(rng, 2, weighted=False)
        K = random_polytope(rng, 2)
        assert product_eval([euler_valuation(2), phi], K) == evaluate(phi, K)


def test_volume_squared_vanishes():
    for K in bodies_for(2)[:5]:
        assert product_eval([volume_valuation(2), volume_valuation(2)], K) == 0


def test_product_is_commutative_and_bilinear():
    S = segment([0, 0], [1, 2])
    a, b = mixed_valuation([SQ]), mixed_valuation([S])
    K = TRI
    assert product_eval([a, b], K) == product_eval([b, a], K)
    lhs = product_eval([combine_valuations([a, b], [2, -1]), a], K)
    assert lhs == 2 * product_eval([a, a], K) - product_eval([b, a], K)
    assert product_eval([PHI_Q, PHI_Q], SQ) == product_eval([PHI_Q, PHI_Q], SQ)


def test_product_dimension_cap():
    chi3 = euler_valuation(3)
    with pytest.raises(CapError):
        product_eval([chi3, chi3, chi3], box([0] * 3, [1] * 3))


def test_components_examples():
    vol = volume_valuation(2)
    assert components(vol, TRI)[:3] == [0, 0, F(1, 2)]
    assert components(euler_valuation(2), TRI)[:3] == [1, 0, 0]
    for K in bodies_for(2)[:4]:
        assert component_eval(homogeneous_component(PHI_Q, 1), K) == evaluate(PHI_Q, K)
    with pytest.raises(ValidationError):
        homogeneous_component(vol, 5)


def test_dilation_consistency():
    rng = random.Random(5)
    for _ in range(4):
        phi = random_valuation(rng, 2)
        K = random_polytope(rng, 2)
        comps = components(phi, K)
        assert sum(c * 4**k for k, c in enumerate(comps)) == evaluate(phi, dilate(K, 4))


def test_homogeneity_of_components():
    K = random_polytope(random.Random(6), 2)
    phi = combine_valuations([euler_valuation(2), PHI_Q, volume_valuation(2)], [1, 2, 3])
    for k in range(3):
        h = homogeneous_component(phi, k)
        assert component_eval(h, dilate(K, 3)) == 3**k * component_eval(h, K)


def test_min_degree_examples():
    T = bodies_for(2)
    assert min_degree(volume_valuation(2), T) == 2
    assert min_degree(euler_valuation(2), T) == 0
    assert min_degree(PHI_Q, T) == 1
    assert min_degree(zero_valuation(2), T) == 3


def test_sigma_examples():
    for n in (1, 2):
        for K in bodies_for(n)[:4]:
            assert evaluate(sigma_reflect(volume_valuation(n)), K) == (-1) ** n * volume(K)
            assert evaluate(sigma_reflect(euler_valuation(n)), K) == 1
            assert sigma_boundary_eval(euler_valuation(n), K) == 1
            assert sigma_boundary_eval(volume_valuation(n), K) == (-1) ** n * volume(K)


def test_sigma_routes_agree_and_square_to_identity():
    rng = random.Random(8)
    for n in (1, 2):
        for _ in range(5):
            phi = random_valuation(rng, n)
            P = random_polytope(rng, n, dim=rng.randint(0, n))
            assert sigma_boundary_eval(phi, P) == evaluate(sigma_reflect(phi), P)
            assert evaluate(sigma_reflect(sigma_reflect(phi)), P) == evaluate(phi, P)


def test_sigma_is_multiplicative():
    # sigma of the product via the boundary formula on product values,
    # against the product of the reflected factors
    a, b = mixed_valuation([segment([0, 0], [1, 2])]), PHI_Q
    for K in (TRI, SQ):
        lhs = sigma_boundary(lambda L: product_eval([a, b], L), K)
        assert lhs == product_eval([sigma_reflect(a), sigma_reflect(b)], K)


def test_duality_transport():
    rng = random.Random(10)
    for _ in range(6):
        f = random_function(rng, 2)
        phi = random_valuation(rng, 2)
        assert evaluate_constructible(phi, verdier_dual(f)) == evaluate_constructible(sigma_reflect(phi), f)


def test_poincare_pair_examples():
    T = bodies_for(2)[:4]
    assert poincare_pair(euler_valuation(2), volume_valuation(2), T) == 1
    assert poincare_pair(volume_valuation(2), volume_valuation(2), T) == 0
    a, b = mixed_valuation([segment([0, 0], [1, 0])]), mixed_valuation([segment([0, 0], [1, 2])])
    assert poincare_pair(a, b, T) == poincare_pair(b, a, T) != 0


def test_poincare_pair_detects_non_constant_ratio():
    x = MultiPoly.monomial(MultiPoly.coordinates(2), (1, 0))
    with pytest.raises(InvariantError):
        # a weighted mixed term is homogeneous of degree 2 but not a volume multiple
        phi = mixed_valuation([segment([0, 0], [1, 0])], x)
        poincare_pair(euler_valuation(2), phi, [SQ, box([1, 0], [2, 1])])


def test_top_component_of_products_is_a_volume_multiple():
    vals = suite_valuations(2)
    ratios = {product_components([vals["phi_S1"], vals["phi_T"]], K)[2] / volume(K) for K in bodies_for(2)}
    assert len(ratios) == 1


def test_integrate_constructible_examples():
    P, Q = hull([[0, 0], [2, 0], [1, 1]]), box([0, 0], [1, 2])
    assert integrate_constructible(indicator(P), debug=True) == 1
    assert integrate_constructible(combine([indicator(P), indicator(Q)], [2, -3]), debug=True) == -1
    assert integrate_constructible(boundary_indicator(box([0] * 3, [1] * 3)), debug=True) == 2


def test_pairing_matrix_examples():
    for n in (1, 2):
        M = pairing_matrix(
            [euler_valuation(n), volume_valuation(n), zero_valuation(n)],
            [indicator(point([0] * n)), indicator(unit_box(n))],
        )
        assert M.entries == ((1, 1), (0, 1), (0, 0))
        assert M.rank == 2
    with pytest.raises(ValidationError):
        pairing_matrix([euler_valuation(1)], [], mode="bogus")


def test_codimension_orthogonality():
    seg = indicator(segment([0, 0], [1, 1]))
    assert evaluate_constructible(volume_valuation(2), seg) == 0
    assert evaluate_constructible(mixed_valuation([segment([0, 0], [1, 0])]), seg) != 0
    pt = indicator(point([1, 1]))
    assert evaluate_constructible(PHI_Q, pt) == 0
    assert evaluate_constructible(euler_valuation(2), pt) == 1
