"""Exact polytopal valuation calculus.

Convex polytopes with rational vertices, constructible functions on
polyhedral complexes, their characteristic cycles, weighted Minkowski
polynomials, and an algebra of valuations with product, involution and
pairings, all in exact rational arithmetic.
"""

__version__ = "0.1.0"
