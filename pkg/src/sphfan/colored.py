"""Colored cones, colored fans, the A2 test and completion by uncolored rays.

Membership test for colored cones
---------------------------------
A pair ``(C, F)`` is a colored cone when ``C`` is generated by ``rho(F)``
together with finitely many valuation-cone elements and ``relint(C)`` meets
the valuation cone ``V``.  The existential clause is decided through the
closed form ``C == cone(rho(F) + gens(C & V))``:

* if the equality holds, ``gens(C & V)`` is a finite subset of ``V`` that
  does the job;
* conversely, if ``C = cone(rho(F) + S)`` with ``S`` a finite subset of
  ``V``, then ``S`` lies in ``C & V``, hence
  ``C <= cone(rho(F) + gens(C & V)) <= C``.

Global-sections criterion
-------------------------
The embedding has only constant global functions when no nonzero weight
``chi`` is nonnegative on every ``rho(D)`` and every ray generator of the
fan, i.e. when those vectors generate the whole space as a cone.  This is
taken as the working criterion; the library never reasons about actual
regular functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .cone import (
    Cone,
    _build,
    cone_from_generators,
    contains,
    dual_cone,
    faces,
    intersection,
    is_face_of,
    relint_common_point,
    relint_contains,
    relint_meets,
)
from .datum import SphericalDatum
from .errors import PreconditionError, SphfanError
from .lp import phase_one
from .rational import primitive_vector, rank
from .report import Report


@dataclass(frozen=True)
class ColoredCone:
    cone: Cone
    colors: frozenset

    def sort_key(self):
        return (self.cone.sort_key(), tuple(sorted(self.colors)))

    def __repr__(self):
        return f"ColoredCone({list(self.cone.generators)}, {sorted(self.colors)})"


def colored_cone(d: SphericalDatum, rays: Iterable = (), colors: Iterable[str] = ()) -> ColoredCone:
    """``(cone(rho(colors) + rays), colors)``; validity is not checked here."""
    colors = frozenset(colors)
    gens = d.rho_images(sorted(colors)) + [tuple(r) for r in rays]
    return ColoredCone(cone_from_generators(d.rank, gens), colors)


def is_colored_cone(d: SphericalDatum, c: Cone, f: Iterable[str]) -> Report:
    report = Report()
    for msg in _colored_cone_errors(d, c, frozenset(f)):
        report.fail(msg)
    return report


@lru_cache(maxsize=65536)
def _colored_cone_errors(d: SphericalDatum, c: Cone, f: frozenset) -> tuple[str, ...]:
    if c.dim != d.rank:
        return (f"cone in dimension {c.dim}, lattice rank {d.rank}",)
    unknown = f - set(d.color_names)
    if unknown:
        return (f"unknown colors {sorted(unknown)}",)
    errors = []
    v_part = intersection(c, d.valuation_cone)
    closed = _build(d.rank, d.rho_images(sorted(f)) + list(v_part.generators))
    if closed != c:
        errors.append("cone is not generated by rho(F) and valuation-cone elements")
    if relint_meets(c, d.valuation_cone) is None:
        errors.append("relative interior misses the valuation cone")
    return tuple(errors)


def is_pointed_colored_cone(d: SphericalDatum, sigma: ColoredCone) -> bool:
    return sigma.cone.is_pointed and all(any(d.rho(D)) for D in sigma.colors)


def colored_faces(d: SphericalDatum, sigma: ColoredCone) -> list[ColoredCone]:
    """Faces ``(C', F & rho^-1(C'))`` that are colored cones, ``sigma`` included."""
    return list(_colored_faces(d, sigma))


@lru_cache(maxsize=16384)
def _colored_faces(d, sigma):
    out = []
    for face in faces(sigma.cone):
        fc = frozenset(D for D in sigma.colors if contains(face, d.rho(D)))
        if not _colored_cone_errors(d, face, fc):
            out.append(ColoredCone(face, fc))
    return tuple(sorted(out, key=ColoredCone.sort_key))


@dataclass(frozen=True)
class ColoredFan:
    datum: SphericalDatum
    cones: tuple

    def __post_init__(self):
        uniq = sorted(set(self.cones), key=ColoredCone.sort_key)
        object.__setattr__(self, "cones", tuple(uniq))

    def __contains__(self, sigma):
        return sigma in self.cones

    def __len__(self):
        return len(self.cones)

    @property
    def is_pointed(self) -> bool:
        return all(is_pointed_colored_cone(self.datum, s) for s in self.cones)

    def uncolored_rays(self) -> list[tuple[int, ...]]:
        """Primitive generators of the one-dimensional uncolored members."""
        return sorted(s.cone.rays[0] for s in self.cones
                      if not s.colors and s.cone.rank == 1 and s.cone.is_pointed)


def validate_colored_fan(d: SphericalDatum, cones: Iterable[ColoredCone]) -> Report:
    cones = sorted(set(cones), key=ColoredCone.sort_key)
    report = Report()
    if not cones:
        return report.fail("a colored fan must be nonempty")
    members = set(cones)
    for s in cones:
        sub = is_colored_cone(d, s.cone, s.colors)
        if not sub:
            report.fail(f"{s!r} is not a colored cone: {'; '.join(sub.errors)}")
    if not report.ok:
        return report
    for s in cones:
        for f in colored_faces(d, s):
            if f not in members:
                report.fail(f"face {f!r} of {s!r} is missing", witness={"cone": s, "face": f})
    for i, s1 in enumerate(cones):
        for s2 in cones[i + 1:]:
            v = relint_common_point(s1.cone, s2.cone, within=d.valuation_cone)
            if v is not None:
                report.fail(f"relative interiors of {s1!r} and {s2!r} meet inside the valuation cone",
                            witness={"cones": (s1, s2), "v": v})
    return report


def make_fan(d: SphericalDatum, cones: Iterable[ColoredCone], check: bool = True) -> ColoredFan:
    cones = list(cones)
    if check:
        report = validate_colored_fan(d, cones)
        if not report:
            raise SphfanError("invalid colored fan: " + "; ".join(report.errors))
    return ColoredFan(d, tuple(cones))


class A2Result(NamedTuple):
    a2: bool
    witness: tuple | None  # (sigma1, sigma2, v)


def has_a2_property(fan: ColoredFan) -> A2Result:
    """Relative interiors of distinct members pairwise disjoint in the whole space."""
    cones = fan.cones
    for i, s1 in enumerate(cones):
        for s2 in cones[i + 1:]:
            v = relint_common_point(s1.cone, s2.cone)
            if v is not None:
                return A2Result(False, (s1, s2, v))
    return A2Result(True, None)


def intersect_in_common_faces(cones: Sequence[Cone]) -> bool:
    """Every pairwise intersection is a face of both cones.

    For a finite family this is the same as the family extending to a fan in
    the usual sense.  Used only to cross-check :func:`has_a2_property`.
    """
    cones = list(dict.fromkeys(cones))
    for i, c1 in enumerate(cones):
        for c2 in cones[i + 1:]:
            meet = intersection(c1, c2)
            if not (is_face_of(meet, c1) and is_face_of(meet, c2)):
                return False
    return True


def spanning_vectors(fan: ColoredFan) -> list[tuple[int, ...]]:
    vecs = {c.rho for c in fan.datum.colors if any(c.rho)}
    for s in fan.cones:
        vecs.update(s.cone.generators)
    return sorted(vecs)


def spans_by_rank_and_lp(dim: int, vectors: Sequence[Sequence]) -> bool:
    """Full rank and a strictly positive linear relation among the vectors."""
    if dim == 0:
        return True
    if rank(vectors, dim) < dim:
        return False
    # sum (1 + y_i) v_i = 0 with y >= 0
    rows = [[v[t] for v in vectors] for t in range(dim)]
    rhs = [-sum(v[t] for v in vectors) for t in range(dim)]
    return phase_one(rows, rhs) is not None


def spans_by_dual_cone(dim: int, vectors: Sequence[Sequence]) -> bool:
    """The dual of ``cone(vectors)`` is the zero cone."""
    return dual_cone(cone_from_generators(dim, vectors, limits=_no_limits(dim, vectors))).is_zero


def _no_limits(dim, vectors):
    from .cone import Limits
    return Limits(max_generators=max(16, len(vectors)), max_dimension=max(8, dim))


def satisfies_global_sections_criterion(fan: ColoredFan) -> bool:
    return spans_by_rank_and_lp(fan.datum.rank, spanning_vectors(fan))


def completion_candidates(d: SphericalDatum) -> list[tuple[int, ...]]:
    """Extreme rays of V, then +- its lineality basis, in that fixed order."""
    out = list(d.valuation_cone.rays)
    for b in d.valuation_cone.lineality:
        out.append(b)
        out.append(tuple(-x for x in b))
    return out


def complete_for_global_sections(fan: ColoredFan) -> ColoredFan:
    """Add uncolored rays from V until the global-sections criterion holds."""
    d = fan.datum
    if not fan.is_pointed:
        raise PreconditionError("completion needs a pointed colored fan")
    if d.valuation_cone.rank != d.rank:
        raise PreconditionError("valuation cone not full-dimensional")
    cones = list(fan.cones)
    current = spanning_vectors(fan)
    if spans_by_rank_and_lp(d.rank, current):
        return fan
    for u in completion_candidates(d):
        if any(relint_contains(s.cone, u) for s in cones):
            continue
        if contains(_build(d.rank, current), u):
            continue
        ray = ColoredCone(cone_from_generators(d.rank, [u]), frozenset())
        cones.append(ray)
        current = sorted(set(current) | {primitive_vector(u)})
        if spans_by_rank_and_lp(d.rank, current):
            return ColoredFan(d, tuple(cones))
    raise SphfanError("no choice of uncolored rays in the valuation cone makes the fan satisfy "
                      "the global-sections criterion")
