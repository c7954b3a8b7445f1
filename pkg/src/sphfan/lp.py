"""Exact feasibility of linear systems.

The working engine is a fraction-free integer phase-one simplex with Bland's
rule; it always terminates and returns an exact rational witness.  Fourier-Motzkin
elimination is kept alongside as an independent decision procedure, used to
cross-check the simplex verdicts.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import DimensionError, SphfanError
from .rational import as_fraction, dot

Row = Sequence
System = Sequence[tuple[Row, object]]


def _integer_row(row, rhs):
    vals = [as_fraction(x) for x in row] + [as_fraction(rhs)]
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    if ints[-1] < 0:
        ints = [-x for x in ints]
    return ints


def _reduce(row):
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            return row
    return [x // g for x in row] if g > 1 else row


def phase_one(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """Find ``y >= 0`` with ``a y = b``, or return None.

    Fraction-free tableau: every row is an integer vector with an implicit
    positive scale, so signs and ratios are read off by cross-multiplication.
    Artificial variables start basic and never re-enter, hence their columns
    are not stored.  Bland's rule (smallest entering index, smallest leaving
    basic index on ties) rules out cycling.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    tab = [_integer_row(r, bi) for r, bi in zip(a, b)]
    basis = [n + i for i in range(m)]
    # phase-one objective row (sum of artificials), same implicit-scale convention
    z = _reduce([-sum(row[j] for row in tab) for j in range(n + 1)])
    while True:
        enter = next((j for j in range(n) if z[j] < 0), None)
        if enter is None:
            break
        pr = -1
        for i in range(m):
            t = tab[i][enter]
            if t > 0:
                if pr < 0:
                    pr = i
                    continue
                # compare rhs_i / t with rhs_pr / t_pr
                lhs = tab[i][n] * tab[pr][enter]
                rhs = tab[pr][n] * t
                if lhs < rhs or (lhs == rhs and basis[i] < basis[pr]):
                    pr = i
        if pr < 0:
            raise SphfanError("phase-one simplex reported an unbounded ray")
        prow = tab[pr]
        piv = prow[enter]
        for i in range(m):
            if i != pr:
                f = tab[i][enter]
                if f:
                    tab[i] = _reduce([piv * x - f * y for x, y in zip(tab[i], prow)])
        f = z[enter]
        z = _reduce([piv * x - f * y for x, y in zip(z, prow)])
        basis[pr] = enter
    if z[n] != 0:
        return None
    y = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            y[bv] = Fraction(tab[i][n], tab[i][bv])
    return tuple(y)


def _homogenize(equalities, inequalities, strict):
    if not any(strict):
        return [as_fraction(b) for _, b in inequalities]
    # Strict systems are only accepted when every right-hand side is zero:
    # then the solution set is a cone, any solution can be scaled by t > 0,
    # and "a.x > 0" may be replaced by "a.x >= 1" without changing feasibility.
    if any(as_fraction(b) != 0 for _, b in list(equalities) + list(inequalities)):
        raise SphfanError("strict inequalities require a homogeneous (scale-invariant) system")
    return [Fraction(1) if s else Fraction(0) for s in strict]


def lp_feasible(dim: int, equalities: System = (), inequalities: System = (),
                strict: Sequence[bool] | None = None, cross_check: bool = False):
    """Feasible point of ``{a.x = b} and {a.x >= b}`` (``>`` where ``strict``).

    Returns a tuple of Fractions or None.  With ``cross_check=True`` the
    verdict is additionally recomputed by Fourier-Motzkin and an
    AssertionError is raised on disagreement.
    """
    equalities = list(equalities)
    inequalities = list(inequalities)
    strict = list(strict) if strict is not None else [False] * len(inequalities)
    if len(strict) != len(inequalities):
        raise DimensionError("one strictness flag per inequality")
    for row, _ in equalities + inequalities:
        if len(row) != dim:
            raise DimensionError(f"constraint of length {len(row)} in dimension {dim}")
    ineq_rhs = _homogenize(equalities, inequalities, strict)
    k = len(inequalities)
    # x = p - q, slack s for each inequality: a.p - a.q - s = b
    a_rows, b_vals = [], []
    for row, rhs in equalities:
        row = [as_fraction(x) for x in row]
        a_rows.append(row + [-x for x in row] + [Fraction(0)] * k)
        b_vals.append(as_fraction(rhs))
    for idx, ((row, _), rhs) in enumerate(zip(inequalities, ineq_rhs)):
        row = [as_fraction(x) for x in row]
        slack = [Fraction(0)] * k
        slack[idx] = Fraction(-1)
        a_rows.append(row + [-x for x in row] + slack)
        b_vals.append(rhs)
    if not a_rows:
        point = tuple(Fraction(0) for _ in range(dim))
    else:
        y = phase_one(a_rows, b_vals)
        point = None if y is None else tuple(y[i] - y[dim + i] for i in range(dim))
    if cross_check:
        fm = fm_feasible(dim, equalities, inequalities, strict)
        assert fm == (point is not None), "simplex and Fourier-Motzkin disagree"
    return point


def fm_feasible(dim: int, equalities: System = (), inequalities: System = (),
                strict: Sequence[bool] | None = None) -> bool:
    """Decide feasibility by Gaussian substitution and Fourier-Motzkin elimination.

    Strict inequalities are tracked natively (no homogenization), so this
    shares no reasoning with :func:`lp_feasible`.
    """
    strict = list(strict) if strict is not None else [False] * len(inequalities)
    cons = [([as_fraction(x) for x in a], as_fraction(b), bool(s))
            for (a, b), s in zip(inequalities, strict)]
    eqs = [([as_fraction(x) for x in a], as_fraction(b)) for a, b in equalities]
    while eqs:
        a, b = eqs.pop()
        k = next((i for i, x in enumerate(a) if x != 0), None)
        if k is None:
            if b != 0:
                return False
            continue
        ak = a[k]

        def substitute(row, rhs, a=a, b=b, k=k, ak=ak):
            c = row[k]
            if c == 0:
                return row, rhs
            f = c / ak
            return [x - f * y for x, y in zip(row, a)], rhs - f * b

        eqs = [substitute(r, rh) for r, rh in eqs]
        cons = [(*substitute(r, rh), s) for r, rh, s in cons]
    for k in range(dim):
        pos, neg, rest = [], [], []
        for c in cons:
            (pos if c[0][k] > 0 else neg if c[0][k] < 0 else rest).append(c)
        new = set()
        for pa, pb, ps in pos:
            for na, nb, ns in neg:
                fp, fn = -na[k], pa[k]
                row = tuple(fp * x + fn * y for x, y in zip(pa, na))
                new.add((row, fp * pb + fn * nb, ps or ns))
        cons = [(list(r), rh, s) for r, rh, s in sorted(new, key=repr)] + rest
    for _, rhs, s in cons:
        if (s and not rhs < 0) or (not s and rhs > 0):
            return False
    return True


def satisfies(point, equalities: System = (), inequalities: System = (),
              strict: Sequence[bool] | None = None) -> bool:
    strict = list(strict) if strict is not None else [False] * len(inequalities)
    for a, b in equalities:
        if dot(a, point) != as_fraction(b):
            return False
    for (a, b), s in zip(inequalities, strict):
        v = dot(a, point)
        if (s and not v > as_fraction(b)) or (not s and v < as_fraction(b)):
            return False
    return True
