"""Weighted volumes of Minkowski combinations as exact polynomials.

For polytopes ``K_1..K_s`` and a polynomial weight ``w`` the map
``lam -> int_{sum lam_i K_i} w`` is a polynomial on the closed orthant.
Its degree in ``lam_i`` is at most ``dim K_i + deg w`` (slice along the
span of ``K_i`` and apply the total-degree bound there), and its total
degree is at most ``m + deg w``.  We recover it by exact interpolation on
the tensor grid ``lam_i in {0, ..., deg_i}`` and then insist that no
coefficient exceeds the total-degree bound.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Callable, Sequence

from .config import get_config
from .errors import CapError, InvariantError, ValidationError
from .integrate import integrate
from .linalg import frac, interpolation_weights
from .polynomials import MultiPoly, mixed_derivative_at_zero
from .polytope import Polytope, _check_dim, minkowski_sum

WeightPoly = MultiPoly


def unit_weight(n: int) -> MultiPoly:
    return MultiPoly.constant(MultiPoly.coordinates(n), 1)


def _check_weight(w: MultiPoly, n: int) -> None:
    if w.nvars != n:
        raise ValidationError(f"weight has {w.nvars} variables, expected {n}")
    cap = get_config().weight_degree_cap
    if w.degree() > cap:
        raise CapError("weight_degree_cap", cap, w.degree(), "weight degree")


@lru_cache(maxsize=200_000)
def _weighted_volume(bodies: tuple[Polytope, ...], lam: tuple[Fraction, ...], w: MultiPoly) -> Fraction:
    body = minkowski_sum(list(bodies), list(lam))
    return integrate(body, w)


def weighted_volume(bodies: Sequence[Polytope], lam: Sequence, w: MultiPoly | None = None) -> Fraction:
    """``int_{sum lam_i bodies_i} w``."""
    if not bodies:
        raise ValidationError("need at least one body")
    n = bodies[0].ambient_dim
    if any(b.ambient_dim != n for b in bodies):
        raise ValidationError("bodies have different ambient dimensions")
    _check_dim(n)
    if w is None:
        w = unit_weight(n)
    _check_weight(w, n)
    lam = tuple(frac(x) for x in lam)
    if len(lam) != len(bodies):
        raise ValidationError("one coefficient per body required")
    if any(x < 0 for x in lam):
        raise ValidationError("coefficients must be nonnegative")
    return _weighted_volume(tuple(bodies), lam, w)


def fit_tensor_polynomial(
    f: Callable[[tuple[int, ...]], Fraction],
    degrees: Sequence[int],
    total_degree: int,
    variables: Sequence[str],
) -> MultiPoly:
    """Interpolate ``f`` on ``prod_i {0..degrees[i]}`` and verify the degree bound.

    Raises :class:`InvariantError` if the fitted polynomial has a nonzero
    coefficient of total degree above ``total_degree``: that means the
    sampled function is not the polynomial it was claimed to be.
    """
    degrees = list(degrees)
    grids = [range(d + 1) for d in degrees]
    values = {pt: frac(f(pt)) for pt in product(*grids)}
    # successive 1-D interpolation: axis by axis, nodes -> coefficients
    for axis, d in enumerate(degrees):
        W = interpolation_weights(list(range(d + 1)))
        new = {}
        for pt in values:
            if pt[axis] != 0:
                continue
            line = [values[pt[:axis] + (t,) + pt[axis + 1:]] for t in range(d + 1)]
            for j in range(d + 1):
                new[pt[:axis] + (j,) + pt[axis + 1:]] = sum((wj * v for wj, v in zip(W[j], line)), Fraction(0))
        values = new
    for e, c in values.items():
        if c != 0 and sum(e) > total_degree:
            raise InvariantError(
                f"fitted polynomial has degree {sum(e)} > bound {total_degree} (exponent {e}, coefficient {c})"
            )
    return MultiPoly.from_dict(variables, values)


def _degree_bounds(bodies: Sequence[Polytope], wdeg: int, m: int) -> list[int]:
    return [min(b.dim + wdeg, m + wdeg) for b in bodies]


def pinned_polynomial(
    pinned: Sequence[Polytope],
    bodies: Sequence[Polytope],
    w: MultiPoly,
    variables: Sequence[str] | None = None,
) -> MultiPoly:
    """Polynomial ``lam -> int_{sum pinned + sum lam_i bodies_i} w``.

    The ``pinned`` bodies enter with coefficient 1 and are not variables.
    """
    allb = list(pinned) + list(bodies)
    if not allb:
        raise ValidationError("need at least one body")
    m = allb[0].ambient_dim
    if any(b.ambient_dim != m for b in allb):
        raise ValidationError("bodies have different ambient dimensions")
    _check_dim(m)
    cap = get_config().max_bodies
    if len(bodies) > cap:
        raise CapError("max_bodies", cap, len(bodies), "Minkowski summands")
    if w.nvars != m:
        raise ValidationError(f"weight has {w.nvars} variables, expected {m}")
    if variables is None:
        variables = tuple(f"l{i + 1}" for i in range(len(bodies)))
    wdeg = w.degree()
    degs = _degree_bounds(bodies, wdeg, m)
    one = Fraction(1)
    pinned_t = tuple(pinned)
    bodies_t = tuple(bodies)

    def f(pt):
        return _weighted_volume(pinned_t + bodies_t, (one,) * len(pinned_t) + tuple(Fraction(x) for x in pt), w)

    return fit_tensor_polynomial(f, degs, m + wdeg, variables)


def minkowski_polynomial(bodies: Sequence[Polytope], w: MultiPoly | None = None) -> MultiPoly:
    """The polynomial ``p`` with ``p(lam) = weighted_volume(bodies, lam, w)`` for all ``lam >= 0``."""
    if not bodies:
        raise ValidationError("need at least one body")
    n = bodies[0].ambient_dim
    if w is None:
        w = unit_weight(n)
    _check_weight(w, n)
    return pinned_polynomial([], bodies, w)


def mixed_volume(bodies: Sequence[Polytope]) -> Fraction:
    """``V(K_1, ..., K_n)`` normalised so that ``V(K, ..., K) = vol K``."""
    n = len(bodies)
    if n == 0 or any(b.ambient_dim != n for b in bodies):
        raise ValidationError("mixed_volume needs n bodies in R^n")
    if n > 3:
        raise CapError("mixed_volume_dim", 3, n, "mixed volume")
    p = minkowski_polynomial(bodies)
    return mixed_derivative_at_zero(p, range(n)) / factorial(n)
