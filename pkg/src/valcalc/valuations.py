"""Valuations built from weighted mixed volumes, and their algebra.

A term ``(c, w, [A_1..A_k])`` is the valuation

    K -> c * d^k/dl_1..dl_k |_0  int_{K + sum l_i A_i} w

(``k = 0`` means ``int_K w``).  Sums of terms form :class:`ValuationExpr`.
The product of ``m`` valuations is evaluated in ``R^{mn}`` on the
``m``-fold diagonal of ``K`` with each factor's bodies placed in its own
block, and the Euler-Verdier involution has two independent routes: by
reflecting the bodies, and through the boundary of the polytope.

Everything here is exact.  Translation invariance holds only for terms
with constant weight; weighted terms are still valuations and every
identity below is checked for them too, but their homogeneous
decomposition runs up to degree ``n + deg w``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

from .config import get_config
from .constructible import (
    ConstructibleFunction,
    boundary_indicator,
    closed_cell_expansion,
    euler_integral,
)
from .errors import CapError, InvariantError, ValidationError
from .integrate import integrate
from .linalg import frac, fraction_rank, interpolation_weights
from .minkowski import _check_weight, pinned_polynomial, unit_weight
from .polynomials import MultiPoly, mixed_derivative_at_zero
from .polytope import Polytope, block_embed, box, diagonal_embed, dilate, reflect, segment, volume


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    weight: MultiPoly
    bodies: tuple[Polytope, ...]

    @property
    def k(self) -> int:
        return len(self.bodies)


def _term_key(t: Term):
    return (t.weight.terms, len(t.bodies), tuple(b.vertices for b in t.bodies))


@dataclass(frozen=True)
class ValuationExpr:
    ambient_dim: int
    terms: tuple[Term, ...]

    def __add__(self, other: "ValuationExpr") -> "ValuationExpr":
        return combine_valuations([self, other], [1, 1])

    def __sub__(self, other: "ValuationExpr") -> "ValuationExpr":
        return combine_valuations([self, other], [1, -1])

    def scale(self, c) -> "ValuationExpr":
        return combine_valuations([self], [c])

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def weight_degree(self) -> int:
        return max((t.weight.degree() for t in self.terms), default=0)

    def dilation_degree(self) -> int:
        """Upper bound for the degree of ``m -> phi(mK)``."""
        return max((self.ambient_dim + t.weight.degree() - t.k for t in self.terms), default=0)


def make_valuation(n: int, terms: Iterable[tuple]) -> ValuationExpr:
    """Canonical expression from ``(coeff, weight or None, bodies)`` triples.

    Bodies within a term are sorted (the mixed derivative is symmetric in
    them) and terms with equal weight and bodies are merged.
    """
    acc: dict = {}
    for coeff, w, bodies in terms:
        if w is None:
            w = unit_weight(n)
        _check_weight(w, n)
        bodies = tuple(sorted(bodies, key=lambda b: b.vertices))
        for b in bodies:
            if b.ambient_dim != n:
                raise ValidationError(f"body in R^{b.ambient_dim}, valuation on R^{n}")
        if len(bodies) > n + w.degree():
            raise ValidationError(
                f"term has {len(bodies)} bodies; more than n + deg w = {n + w.degree()} always vanish"
            )
        key = (w, bodies)
        acc[key] = acc.get(key, Fraction(0)) + frac(coeff)
    terms_out = [Term(c, w, b) for (w, b), c in acc.items() if c != 0]
    return ValuationExpr(n, tuple(sorted(terms_out, key=_term_key)))


def combine_valuations(vals: Sequence[ValuationExpr], coeffs: Sequence) -> ValuationExpr:
    if not vals:
        raise ValidationError("nothing to combine")
    n = vals[0].ambient_dim
    if any(v.ambient_dim != n for v in vals):
        raise ValidationError("valuations live in different dimensions")
    raw = []
    for v, c in zip(vals, coeffs):
        c = frac(c)
        raw.extend((c * t.coeff, t.weight, t.bodies) for t in v.terms)
    return make_valuation(n, raw)


def zero_valuation(n: int) -> ValuationExpr:
    return ValuationExpr(n, ())


def volume_valuation(n: int, w: MultiPoly | None = None) -> ValuationExpr:
    return make_valuation(n, [(1, w, ())])


def euler_valuation(n: int) -> ValuationExpr:
    """``chi`` as the mixed term over the ``n`` unit axis segments."""
    segs = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        segs.append(segment([0] * n, e))
    return make_valuation(n, [(1, None, segs)])


def mixed_valuation(bodies: Sequence[Polytope], w: MultiPoly | None = None, coeff=1) -> ValuationExpr:
    """``K -> coeff * d^k/dl|_0 int_{K + sum l_i A_i} w``."""
    if not bodies:
        raise ValidationError("use volume_valuation for a term without bodies")
    return make_valuation(bodies[0].ambient_dim, [(coeff, w, bodies)])


def _check_body(phi: ValuationExpr, K: Polytope) -> None:
    if K.ambient_dim != phi.ambient_dim:
        raise ValidationError(f"body in R^{K.ambient_dim}, valuation on R^{phi.ambient_dim}")


@lru_cache(maxsize=100_000)
def _term_value(w: MultiPoly, bodies: tuple[Polytope, ...], pinned: tuple[Polytope, ...]) -> Fraction:
    if not bodies:
        if len(pinned) != 1:
            raise InvariantError("a term without bodies needs exactly one pinned body")
        return integrate(pinned[0], w)
    p = pinned_polynomial(pinned, bodies, w)
    return mixed_derivative_at_zero(p, range(len(bodies)))


def evaluate(phi: ValuationExpr, K: Polytope) -> Fraction:
    _check_body(phi, K)
    return sum((t.coeff * _term_value(t.weight, t.bodies, (K,)) for t in phi.terms), Fraction(0))


def euler_extension(value: Callable[[Polytope], Fraction], f: ConstructibleFunction) -> Fraction:
    """Pair ``f`` with a valuation given by its values on closed cells.

    ``f`` is rewritten as a combination of closed-cell indicators, on which
    a valuation is determined by additivity.
    """
    return sum((a * value(G) for G, a in closed_cell_expansion(f).items()), Fraction(0))


def evaluate_constructible(phi: ValuationExpr, f: ConstructibleFunction) -> Fraction:
    """``<f, phi>``."""
    if f.ambient_dim != phi.ambient_dim:
        raise ValidationError("function and valuation live in different dimensions")
    return euler_extension(lambda G: evaluate(phi, G), f)


# ---------------------------------------------------------------- products


def _product_terms(phis: Sequence[ValuationExpr]):
    return iproduct(*(phi.terms for phi in phis))


def _check_product(phis: Sequence[ValuationExpr], K: Polytope) -> tuple[int, int]:
    if not phis:
        raise ValidationError("empty product")
    n = phis[0].ambient_dim
    if any(p.ambient_dim != n for p in phis):
        raise ValidationError("factors live in different dimensions")
    _check_body(phis[0], K)
    m = len(phis)
    cap = get_config().max_dim
    if m * n > cap:
        raise CapError("max_dim", cap, m * n, f"{m}-fold product in R^{n}")
    return n, m


@lru_cache(maxsize=100_000)
def _product_term_value(terms: tuple[Term, ...], n: int, K: Polytope) -> Fraction:
    m = len(terms)
    N = m * n
    coords = MultiPoly.coordinates(N)
    w = MultiPoly.constant(coords, 1)
    bodies = []
    for slot, t in enumerate(terms):
        w = w * t.weight.embed(coords, [slot * n + j for j in range(n)])
        bodies.extend(block_embed(A, slot, m) for A in t.bodies)
    pinned = (diagonal_embed(K, m),) if m > 1 else (K,)
    if len(bodies) > N + w.degree():
        return Fraction(0)
    return _term_value(w, tuple(bodies), pinned)


def product_eval(phis: Sequence[ValuationExpr], K: Polytope) -> Fraction:
    """``(phi_1 * ... * phi_m)(K)`` via the ``m``-fold diagonal in ``R^{mn}``."""
    n, m = _check_product(phis, K)
    total = Fraction(0)
    for ts in _product_terms(phis):
        c = Fraction(1)
        for t in ts:
            c *= t.coeff
        total += c * _product_term_value(tuple(ts), n, K)
    return total


def product_dilation_degree(phis: Sequence[ValuationExpr]) -> int:
    n = phis[0].ambient_dim
    best = 0
    for ts in _product_terms(phis):
        best = max(best, len(phis) * n + sum(t.weight.degree() - t.k for t in ts))
    return best


# ---------------------------------------------------- homogeneous pieces


def dilation_components(value: Callable[[Polytope], Fraction], K: Polytope, degree: int) -> list[Fraction]:
    """Coefficients of the polynomial ``m -> value(mK)``, from ``m = 0..degree``."""
    nodes = list(range(degree + 1))
    W = interpolation_weights(nodes)
    vals = [value(dilate(K, m)) for m in nodes]
    return [sum((wj * v for wj, v in zip(row, vals)), Fraction(0)) for row in W]


@dataclass(frozen=True)
class HomogeneousComponent:
    parent: ValuationExpr
    degree: int


def homogeneous_component(phi: ValuationExpr, k: int) -> HomogeneousComponent:
    top = max(phi.ambient_dim, phi.dilation_degree())
    if not 0 <= k <= top:
        raise ValidationError(f"degree {k} outside 0..{top}")
    return HomogeneousComponent(phi, k)


def components(phi: ValuationExpr, K: Polytope) -> list[Fraction]:
    """All homogeneous components of ``phi`` at ``K``, indexed by degree."""
    _check_body(phi, K)
    top = max(phi.ambient_dim, phi.dilation_degree())
    return dilation_components(lambda L: evaluate(phi, L), K, top)


def component_eval(h: HomogeneousComponent, K: Polytope) -> Fraction:
    return components(h.parent, K)[h.degree]


def product_components(phis: Sequence[ValuationExpr], K: Polytope) -> list[Fraction]:
    n, _ = _check_product(phis, K)
    top = max(n, product_dilation_degree(phis))
    return dilation_components(lambda L: product_eval(phis, L), K, top)


def min_degree(phi: ValuationExpr, testset: Sequence[Polytope]) -> int:
    """Smallest degree whose component is nonzero on some test body.

    This is relative to the test set.  ``n + 1`` means every component
    vanished on it.
    """
    if not testset:
        raise ValidationError("empty test set")
    best = None
    for K in testset:
        comps = components(phi, K)
        for k, c in enumerate(comps):
            if c != 0:
                best = k if best is None else min(best, k)
                break
    return phi.ambient_dim + 1 if best is None else best


# ------------------------------------------------------------- involution


def sigma_reflect(phi: ValuationExpr) -> ValuationExpr:
    """``sigma phi`` by reflecting every body through the origin.

    A term with ``k`` bodies picks up the sign ``(-1)^(n-k)``; weights stay.
    """
    n = phi.ambient_dim
    return make_valuation(
        n, [((-1) ** (n - t.k) * t.coeff, t.weight, [reflect(A) for A in t.bodies]) for t in phi.terms]
    )


def sigma_boundary(value: Callable[[Polytope], Fraction], P: Polytope) -> Fraction:
    """``(-1)^dim P * (phi(P) - phi(boundary of P))`` for any valuation given by values."""
    inner = value(P) - euler_extension(value, boundary_indicator(P))
    return (-1) ** P.dim * inner


def sigma_boundary_eval(phi: ValuationExpr, P: Polytope) -> Fraction:
    _check_body(phi, P)
    return sigma_boundary(lambda G: evaluate(phi, G), P)


# ---------------------------------------------------------------- pairings


def poincare_pair(phi: ValuationExpr, psi: ValuationExpr, testset: Sequence[Polytope]) -> Fraction:
    """Constant ``c`` with ``(phi * psi)_n = c * vol`` on the test set.

    Raises :class:`InvariantError` if the ratio is not constant: the top
    degree part of a translation-invariant valuation is a multiple of the
    volume, so a varying ratio points at a bug.
    """
    n = phi.ambient_dim
    if not testset:
        raise ValidationError("empty test set")
    ratio = None
    for K in testset:
        if K.dim != n:
            raise ValidationError("poincare_pair needs full-dimensional test bodies")
        c = product_components([phi, psi], K)[n] / volume(K)
        if ratio is None:
            ratio = c
        elif c != ratio:
            raise InvariantError(f"top-degree ratio not constant: {ratio} vs {c} on {K}")
    return ratio


def integrate_constructible(f: ConstructibleFunction, *, debug: bool | None = None) -> Fraction:
    """``int f dchi``; with ``debug`` also checks it against ``<f, chi>``."""
    val = euler_integral(f)
    if debug is None:
        debug = bool(os.environ.get("VALCALC_DEBUG"))
    if debug:
        other = evaluate_constructible(euler_valuation(f.ambient_dim), f)
        if other != val:
            raise InvariantError(f"Euler integral {val} differs from <f, chi> = {other}")
    return val


@dataclass(frozen=True)
class PairingMatrix:
    rows: tuple
    cols: tuple
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return fraction_rank([list(r) for r in self.entries]) if self.entries else 0


def pairing_matrix(rows: Sequence[ValuationExpr], cols: Sequence, mode: str = "evaluation", *, testset=None) -> PairingMatrix:
    """Entries ``<col, row>`` (mode ``evaluation``) or ``poincare_pair(row, col)``."""
    if mode == "evaluation":
        entries = tuple(tuple(evaluate_constructible(phi, f) for f in cols) for phi in rows)
    elif mode == "poincare":
        if testset is None:
            raise ValidationError("poincare mode needs a test set")
        entries = tuple(tuple(poincare_pair(phi, psi, testset) for psi in cols) for phi in rows)
    else:
        raise ValidationError(f"unknown pairing mode {mode!r}")
    return PairingMatrix(tuple(rows), tuple(cols), entries)


def unit_box(n: int, a=1) -> Polytope:
    return box([0] * n, [a] * n)
