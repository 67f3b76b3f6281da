"""Small exact linear-algebra helpers over ``Fraction`` and ``int``.

Matrices here are tiny (at most a few dozen rows, at most 6 columns in the
geometric code), so plain nested tuples beat any array library once exactness
is required.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import ValidationError

Vec = tuple[Fraction, ...]


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``.

    Floats are refused: every quantity in the exact core must be rational
    by construction.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if "." in text or "e" in text.lower():
            raise ValidationError(f"decimal literal {x!r} not allowed; use p/q")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not a rational number: {x!r}") from None
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def common_denominator(rows: Iterable[Sequence[Fraction]]) -> int:
    den = 1
    for row in rows:
        for x in row:
            d = x.denominator
            if den % d:
                den = lcm(den, d)
    return den


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, keeping its direction."""
    den = common_denominator([v])
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [[frac(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Basis of ``{x : A x = 0}`` in canonical (rref-derived) form."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    r, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(r, piv):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def span_basis(vectors: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Canonical basis (rref rows) of the span of ``vectors``."""
    if not vectors:
        return []
    r, _ = rref(vectors)
    return [tuple(row) for row in r]


def reduce_mod(v: Sequence, basis_rref: Sequence[Sequence], pivots: Sequence[int]) -> Vec:
    """Canonical representative of ``v`` modulo the span of an rref basis.

    Zeroes the pivot coordinates, so two vectors congruent modulo the span
    map to the same tuple.
    """
    out = [frac(x) for x in v]
    for row, p in zip(basis_rref, pivots):
        c = out[p]
        if c:
            out = [x - c * y for x, y in zip(out, row)]
    return tuple(out)


def solve(a: Sequence[Sequence], b: Sequence) -> Vec:
    """Solve a square nonsingular system exactly."""
    n = len(a)
    aug = [list(map(frac, row)) + [frac(bi)] for row, bi in zip(a, b)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) != n:
        raise ZeroDivisionError("singular system")
    return tuple(row[n] for row in r)


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def int_kernel_vector(rows: Sequence[Sequence[int]], ncols: int) -> tuple[int, ...] | None:
    """Primitive integer generator of a one-dimensional integer nullspace.

    Fraction-free Gauss-Jordan elimination: every pivot row ends up as
    ``D * rref_row`` with a common ``D``, so the kernel vector can be read
    off without any division.  Returns ``None`` if the kernel is not
    one-dimensional.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv_row = a[r]
        piv = piv_row[c]
        for i in range(nrows):
            if i == r:
                continue
            ai = a[i]
            aic = ai[c]
            a[i] = [(piv * x - aic * y) // prev for x, y in zip(ai, piv_row)]
        prev = piv
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    if len(pivots) != ncols - 1:
        return None
    free = next(c for c in range(ncols) if c not in pivots)
    x = [0] * ncols
    x[free] = prev
    for i, p in enumerate(pivots):
        x[p] = -a[i][free]
    g = reduce(gcd, x, 0)
    if x[free] < 0:
        g = -g
    return tuple(v // g for v in x)


def det(m: Sequence[Sequence]) -> Fraction:
    rows = [[frac(x) for x in row] for row in m]
    den = common_denominator(rows)
    ints = [[int(x * den) for x in row] for row in rows]
    return Fraction(bareiss_det(ints), den ** len(rows))


def int_rank(m: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in m]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            aic = a[i][c]
            a[i] = [(a[i][j] * piv - aic * a[r][j]) // prev for j in range(ncols)]
        prev = piv
        r += 1
        if r == nrows:
            break
    return r


def fraction_rank(m: Sequence[Sequence]) -> int:
    """Rank of a rational matrix, computed fraction-free after row scaling."""
    rows = []
    for row in m:
        row = [frac(x) for x in row]
        den = common_denominator([row])
        rows.append([int(x * den) for x in row])
    return int_rank(rows)


def interpolation_weights(nodes: Sequence[int]) -> list[list[Fraction]]:
    """Matrix ``W`` with ``coeffs = W @ values`` for 1-D polynomial fitting.

    ``W`` is the inverse of the Vandermonde matrix on ``nodes``; row ``j``
    extracts the coefficient of ``t**j``.
    """
    n = len(nodes)
    vand = [[Fraction(x) ** j for j in range(n)] for x in nodes]
    # invert by solving against identity columns
    aug = [row + [Fraction(int(i == k)) for k in range(n)] for i, row in enumerate(vand)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("repeated interpolation nodes")
    return [row[n:] for row in r]
