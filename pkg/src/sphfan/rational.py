"""Exact rational vectors and matrices.

Vectors are plain tuples of :class:`fractions.Fraction` (or ``int`` where the
value is known to be integral); matrices are tuples of row tuples.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, SphfanError

Vector = tuple
Matrix = tuple


def as_fraction(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string exactly.

    Floats are rejected: they would silently introduce binary rounding.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact rational: {x!r}") from exc
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vector(values: Iterable) -> Vector:
    return tuple(as_fraction(v) for v in values)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(vector(r) for r in rows)
    if out and len({len(r) for r in out}) > 1:
        raise DimensionError("matrix rows have different lengths")
    return out


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def transpose(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not rows:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*rows))


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(r, v) for r in rows)


def primitive_vector(v: Sequence) -> tuple[int, ...]:
    """Positive multiple of ``v`` with coprime integer entries."""
    fr = [as_fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise SphfanError("no primitive representative of the zero vector")
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


def primitive_int(v: Sequence[int]) -> tuple[int, ...]:
    # fast path for integer input already known to be nonzero
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise SphfanError("no primitive representative of the zero vector")
    return tuple(x // g for x in v)


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form with leftmost-pivot rule; zero rows dropped."""
    m = [[as_fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        p = m[row][col]
        m[row] = [x / p for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return tuple(tuple(r) for r in m[:row]), tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[0])


def kernel_basis(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of the right kernel ``{x : m x = 0}``.

    The basis is returned in reduced row echelon form, which makes it a
    canonical function of the kernel itself (not just of ``m``).
    """
    if ncols is None:
        if not rows:
            raise DimensionError("column count needed for an empty matrix")
        ncols = len(rows[0])
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in zip(red, pivots):
            x[pc] = -r[f]
        basis.append(x)
    if not basis:
        return ()
    return rref(basis, ncols)[0]


def row_space_basis(rows: Sequence[Sequence], ncols: int) -> Matrix:
    return rref(rows, ncols)[0]


def canonical_subspace_basis(rows: Sequence[Sequence], ncols: int) -> tuple[tuple[int, ...], ...]:
    """RREF basis of the row space, each row scaled to a primitive integer vector."""
    return tuple(primitive_vector(r) for r in rref(rows, ncols)[0])


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """Some solution of ``m x = rhs`` (free variables set to 0), or None."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [as_fraction(b)] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[ncols]
    return tuple(x)


def project_onto_complement(v: Sequence, basis: Sequence[Sequence]) -> Vector:
    """Orthogonal projection of ``v`` onto the complement of ``span(basis)``."""
    if not basis:
        return tuple(as_fraction(x) for x in v)
    gram = [[dot(a, b) for b in basis] for a in basis]
    coeffs = solve(gram, [dot(b, v) for b in basis])
    out = [as_fraction(x) for x in v]
    for c, b in zip(coeffs, basis):
        if c:
            out = [x - c * y for x, y in zip(out, b)]
    return tuple(out)


def determinant(rows: Sequence[Sequence]) -> Fraction:
    m = [[as_fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] / m[col][col]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det
