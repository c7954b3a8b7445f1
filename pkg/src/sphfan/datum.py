"""The combinatorial invariants of a spherical homogeneous space.

A :class:`SphericalDatum` is supplied by the user: the rank of the lattice,
the colors with their images under rho, and the valuation cone.  Nothing
here is derived from group theory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cone import Cone, cone_from_generators, cone_from_inequalities, contains, cone_predicates, dual_cone, full_space
from .errors import DimensionError, InvalidDatum
from .rational import as_fraction
from .report import Report


@dataclass(frozen=True)
class Color:
    name: str
    rho: tuple[int, ...]


@dataclass(frozen=True)
class SphericalDatum:
    rank: int
    colors: tuple[Color, ...]
    valuation_cone: Cone

    @property
    def color_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.colors)

    def color_index(self, name: str) -> int:
        for i, c in enumerate(self.colors):
            if c.name == name:
                return i
        raise KeyError(f"unknown color {name!r}")

    def rho(self, name: str) -> tuple[int, ...]:
        return self.colors[self.color_index(name)].rho

    def rho_images(self, names) -> list[tuple[int, ...]]:
        return [self.rho(n) for n in names]


def make_datum(rank: int, valuation_cone: Cone | None = None,
               colors: Sequence[tuple[str, Sequence]] = ()) -> SphericalDatum:
    """Convenience constructor; ``valuation_cone=None`` means the whole space (toric case)."""
    if valuation_cone is None:
        valuation_cone = full_space(rank)
    cols = []
    for name, rho in colors:
        if len(rho) != rank:
            raise DimensionError(f"color {name}: rho has length {len(rho)}, expected {rank}")
        vals = [as_fraction(x) for x in rho]
        if any(v.denominator != 1 for v in vals):
            raise InvalidDatum(f"color {name}: rho must be an integer vector")
        cols.append(Color(str(name), tuple(int(v) for v in vals)))
    return SphericalDatum(rank, tuple(cols), valuation_cone)


def validate_datum(d: SphericalDatum) -> Report:
    report = Report()
    if d.valuation_cone.dim != d.rank:
        return report.fail(f"valuation cone lives in dimension {d.valuation_cone.dim}, rank is {d.rank}")
    if d.valuation_cone.rank != d.rank:
        report.fail("valuation cone not full-dimensional")
    names = d.color_names
    if len(set(names)) != len(names):
        report.fail("duplicate color names")
    for c in d.colors:
        if len(c.rho) != d.rank:
            report.fail(f"color {c.name}: rho has length {len(c.rho)}, expected {d.rank}")
        elif not all(isinstance(x, int) for x in c.rho):
            report.fail(f"color {c.name}: rho is not an integer vector")
    if report.ok and not cone_predicates(dual_cone(d.valuation_cone)).is_simplicial:
        report.warn("valuation cone is not cosimplicial (its dual cone is not simplicial)")
    return report


def is_valuation(d: SphericalDatum, v) -> bool:
    return contains(d.valuation_cone, v)


def valuation_cone_from_json(rank: int, obj: dict) -> Cone:
    if "generators" in obj:
        return cone_from_generators(rank, [[as_fraction(x) for x in g] for g in obj["generators"]])
    if "inequalities" in obj:
        return cone_from_inequalities(rank, [[as_fraction(x) for x in a] for a in obj["inequalities"]],
                                      [[as_fraction(x) for x in e] for e in obj.get("equations", [])])
    raise InvalidDatum("valuation_cone needs 'generators' or 'inequalities'")
