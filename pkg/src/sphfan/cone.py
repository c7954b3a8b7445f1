"""Finitely generated rational polyhedral cones.

A :class:`Cone` carries both representations, computed eagerly:

* generators: primitive integer vectors, deduplicated and sorted; for a cone
  with lineality these are ``+-`` a canonical lineality basis together with
  the extreme rays taken modulo the lineality space,
* facet normals and span equations: ``c = {x : <n, x> >= 0, <e, x> = 0}``.

Both directions go through the double description method, so the two
representations are always mutually consistent.  Two cones are equal iff
their canonical generator lists agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionError, LimitExceeded
from .lp import phase_one
from .rational import (
    as_fraction,
    canonical_subspace_basis,
    dot,
    primitive_int,
    primitive_vector,
    project_onto_complement,
    rank,
)

IntVector = tuple[int, ...]


@dataclass(frozen=True)
class Limits:
    max_generators: int = 16
    max_dimension: int = 8


DEFAULT_LIMITS = Limits()


def _double_description(dim: int, constraints: Iterable[IntVector]):
    """Generators of ``{x : <a, x> >= 0 for a in constraints}``.

    Returns ``(lineality_basis, rays)``; the rays are a minimal generating
    set of the cone modulo its lineality space.
    """
    lin = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[IntVector] = []
    done: list[IntVector] = []
    for a in constraints:
        if not any(a):
            continue
        k = next((i for i, l in enumerate(lin) if dot(a, l) != 0), None)
        if k is not None:
            # a line leaves the lineality space and becomes a ray
            l0 = lin.pop(k)
            s = dot(a, l0)
            if s < 0:
                l0 = tuple(-x for x in l0)
                s = -s
            lin = [primitive_int(tuple(s * x - dot(a, l) * y for x, y in zip(l, l0))) for l in lin]
            moved = []
            for r in rays:
                r2 = tuple(s * x - dot(a, r) * y for x, y in zip(r, l0))
                if any(r2):
                    moved.append(primitive_int(r2))
            rays = list(dict.fromkeys(moved + [primitive_int(l0)]))
            done.append(a)
            continue
        vals = [dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        if not neg:
            done.append(a)
            continue
        zero_sets = {r: frozenset(i for i, c in enumerate(done) if dot(c, r) == 0) for r in rays}
        new = [r for r, v in zip(rays, vals) if v >= 0]
        for p in pos:
            zp = zero_sets[p]
            ap = dot(a, p)
            for n in neg:
                common = zp & zero_sets[n]
                # combinatorial adjacency test
                if any(common <= zero_sets[r] for r in rays if r != p and r != n):
                    continue
                an = dot(a, n)
                new.append(primitive_int(tuple(ap * y - an * x for x, y in zip(p, n))))
        rays = list(dict.fromkeys(new))
        done.append(a)
    return lin, rays


def _to_int_generators(dim: int, gens: Iterable) -> list[IntVector]:
    out = []
    for g in gens:
        if len(g) != dim:
            raise DimensionError(f"vector of length {len(g)} in dimension {dim}")
        if any(as_fraction(x) != 0 for x in g):
            out.append(primitive_vector(g))
    return out


def _reduce_mod(vectors: Iterable[Sequence], basis: Sequence[Sequence]) -> list[IntVector]:
    out = set()
    for v in vectors:
        p = project_onto_complement(v, basis) if basis else v
        if any(x != 0 for x in p):
            out.add(primitive_vector(p))
    return sorted(out)


class Cone:
    """Immutable rational polyhedral cone in ``Q^dim``; see module docstring."""

    __slots__ = ("dim", "generators", "rays", "lineality", "facet_normals",
                 "span_equations", "rank", "_hash")

    def __init__(self, dim, generators, rays, lineality, facet_normals, span_equations, rank_):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "lineality", lineality)
        object.__setattr__(self, "facet_normals", facet_normals)
        object.__setattr__(self, "span_equations", span_equations)
        object.__setattr__(self, "rank", rank_)
        object.__setattr__(self, "_hash", hash((dim, generators)))

    def __setattr__(self, name, value):
        raise AttributeError("Cone is immutable")

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.dim == other.dim and self.generators == other.generators

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Cone(dim={self.dim}, generators={list(self.generators)})"

    def sort_key(self):
        return (self.rank, self.generators)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def to_json(self):
        return {"dim": self.dim, "generators": [[str(x) for x in g] for g in self.generators]}


def _build(dim: int, gens: Iterable) -> Cone:
    gens = _to_int_generators(dim, gens)
    dual_lin, dual_rays = _double_description(dim, gens)
    span_eqs = canonical_subspace_basis(dual_lin, dim) if dual_lin else ()
    facets = tuple(_reduce_mod(dual_rays, dual_lin))
    constraints = list(facets) + list(span_eqs) + [tuple(-x for x in e) for e in span_eqs]
    lin, rays = _double_description(dim, constraints)
    lin_basis = canonical_subspace_basis(lin, dim) if lin else ()
    ext = tuple(_reduce_mod(rays, lin_basis))
    gset = set(ext)
    for b in lin_basis:
        gset.add(b)
        gset.add(tuple(-x for x in b))
    return Cone(dim, tuple(sorted(gset)), ext, lin_basis, facets, span_eqs, dim - len(span_eqs))


def cone_from_generators(dim: int, gens: Iterable = (), limits: Limits = DEFAULT_LIMITS) -> Cone:
    """Canonical cone generated by ``gens`` (the empty set gives the zero cone)."""
    gens = list(gens)
    if dim > limits.max_dimension:
        raise LimitExceeded(f"dimension {dim} exceeds cap {limits.max_dimension}")
    if len(gens) > limits.max_generators:
        raise LimitExceeded(f"{len(gens)} generators exceed cap {limits.max_generators}")
    return _build(dim, gens)


def cone_from_inequalities(dim: int, inequalities: Iterable = (), equations: Iterable = ()) -> Cone:
    """Cone ``{x : <a, x> >= 0, <e, x> = 0}``."""
    cons = []
    for a in inequalities:
        cons.extend(_to_int_generators(dim, [a]))
    for e in equations:
        for v in _to_int_generators(dim, [e]):
            cons.append(v)
            cons.append(tuple(-x for x in v))
    lin, rays = _double_description(dim, cons)
    return _build(dim, list(rays) + list(lin) + [tuple(-x for x in l) for l in lin])


def zero_cone(dim: int) -> Cone:
    return _build(dim, ())


def full_space(dim: int) -> Cone:
    return cone_from_inequalities(dim)


def dual_cone(c: Cone) -> Cone:
    """``{y : <y, x> >= 0 for all x in c}``."""
    gens = list(c.facet_normals) + list(c.span_equations) + [tuple(-x for x in e) for e in c.span_equations]
    return _build(c.dim, gens)


def intersection(c1: Cone, c2: Cone) -> Cone:
    _check_same_dim(c1, c2)
    return cone_from_inequalities(c1.dim, c1.facet_normals + c2.facet_normals,
                                  c1.span_equations + c2.span_equations)


def cone_sum(c1: Cone, c2: Cone) -> Cone:
    _check_same_dim(c1, c2)
    return _build(c1.dim, c1.generators + c2.generators)


def _check_same_dim(*cones: Cone):
    if len({c.dim for c in cones}) > 1:
        raise DimensionError("cones live in different ambient dimensions")


def _check_vec(c: Cone, v):
    if len(v) != c.dim:
        raise DimensionError(f"vector of length {len(v)} for cone in dimension {c.dim}")


class ExtremeRays(NamedTuple):
    rays: tuple[IntVector, ...]
    lineality: tuple[IntVector, ...]


def extreme_rays(c: Cone) -> ExtremeRays:
    """Extreme rays (modulo lineality) and a lineality basis; minimal when pointed."""
    return ExtremeRays(c.rays, c.lineality)


def contains(c: Cone, v) -> bool:
    _check_vec(c, v)
    return (all(dot(e, v) == 0 for e in c.span_equations)
            and all(dot(n, v) >= 0 for n in c.facet_normals))


def relint_contains(c: Cone, v) -> bool:
    """``v`` lies in the span of ``c`` and strictly inside every facet."""
    _check_vec(c, v)
    return (all(dot(e, v) == 0 for e in c.span_equations)
            and all(dot(n, v) > 0 for n in c.facet_normals))


def is_subcone(c1: Cone, c2: Cone) -> bool:
    _check_same_dim(c1, c2)
    return all(contains(c2, g) for g in c1.generators)


def _relint_point(cones: Sequence[Cone], within: Cone | None = None):
    return _relint_point_cached(tuple(cones), within)


@lru_cache(maxsize=131072)
def _relint_point_cached(cones: tuple, within: Cone | None):
    # A point of relint(c) is exactly a combination of all generators of c
    # with strictly positive coefficients; since relative interiors are
    # invariant under positive scaling, "> 0" can be replaced by ">= 1".
    # Substituting lambda = 1 + lambda' leaves a plain y >= 0 system.
    dim = cones[0].dim
    sizes = [len(c.generators) for c in cones]
    extra = len(within.facet_normals) if within is not None else 0
    nvars = sum(sizes) + extra
    rows, rhs = [], []
    base = [sum(g[t] for g in cones[0].generators) for t in range(dim)]
    offset0 = 0
    offset = sizes[0]
    for c, size in zip(cones[1:], sizes[1:]):
        other = [sum(g[t] for g in c.generators) for t in range(dim)]
        for t in range(dim):
            row = [0] * nvars
            for i, g in enumerate(cones[0].generators):
                row[offset0 + i] = g[t]
            for j, h in enumerate(c.generators):
                row[offset + j] = -h[t]
            rows.append(row)
            rhs.append(other[t] - base[t])
        offset += size
    if within is not None:
        g0 = cones[0].generators
        for k, n in enumerate(within.facet_normals):
            row = [0] * nvars
            for i, g in enumerate(g0):
                row[i] = dot(n, g)
            row[sum(sizes) + k] = -1
            rows.append(row)
            rhs.append(-dot(n, base))
        for e in within.span_equations:
            row = [0] * nvars
            for i, g in enumerate(g0):
                row[i] = dot(e, g)
            rows.append(row)
            rhs.append(-dot(e, base))
    if nvars == 0:
        return tuple(Fraction(0) for _ in range(dim))
    if not rows:
        y = tuple(Fraction(0) for _ in range(nvars))
    else:
        y = phase_one(rows, rhs)
        if y is None:
            return None
    return tuple(sum(((1 + y[i]) * g[t] for i, g in enumerate(cones[0].generators)), Fraction(0))
                 for t in range(dim))


def relint_common_point(c1: Cone, c2: Cone, within: Cone | None = None):
    """A vector in ``relint(c1) & relint(c2)`` (and in ``within`` if given), or None."""
    _check_same_dim(c1, c2)
    if within is not None:
        _check_same_dim(c1, within)
    return _relint_point([c1, c2], within)


def relint_meets(c: Cone, k: Cone):
    """A vector in ``relint(c) & k``, or None."""
    _check_same_dim(c, k)
    return _relint_point([c], k)


def relint_subset(c1: Cone, c2: Cone) -> bool:
    """``relint(c1)`` is contained in ``relint(c2)``."""
    return is_subcone(c1, c2) and relint_common_point(c1, c2) is not None


def _face_from_zero_set(c: Cone, normals) -> Cone:
    return _build(c.dim, [g for g in c.generators if all(dot(n, g) == 0 for n in normals)])


def is_face_of(f: Cone, c: Cone) -> bool:
    _check_same_dim(f, c)
    if not is_subcone(f, c):
        return False
    active = [n for n in c.facet_normals if all(dot(n, g) == 0 for g in f.generators)]
    return _face_from_zero_set(c, active) == f


def faces(c: Cone) -> list[Cone]:
    """All faces of ``c`` (``c`` itself and its minimal face included), sorted."""
    gens = c.generators
    incidence = [frozenset(i for i, g in enumerate(gens) if dot(n, g) == 0) for n in c.facet_normals]
    start = frozenset(range(len(gens)))
    seen = {start}
    queue = [start]
    while queue:
        cur = queue.pop()
        for inc in incidence:
            sub = cur & inc
            if sub != cur and sub not in seen:
                seen.add(sub)
                queue.append(sub)
    out = {_build(c.dim, [gens[i] for i in s]) for s in seen}
    return sorted(out, key=Cone.sort_key)


class ConePredicates(NamedTuple):
    is_pointed: bool
    is_simplicial: bool
    dimension: int


def cone_predicates(c: Cone) -> ConePredicates:
    simplicial = c.is_pointed and rank(c.rays, c.dim) == len(c.rays) if c.rays else c.is_pointed
    return ConePredicates(c.is_pointed, simplicial, c.rank)


def linear_image(c: Cone, m: Sequence[Sequence], target_dim: int) -> Cone:
    """Image of ``c`` under ``x -> m x`` (``m`` has ``target_dim`` rows)."""
    return _build(target_dim, [tuple(dot(row, g) for row in m) for g in c.generators])
