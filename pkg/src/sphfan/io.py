"""Problem files and report serialization.

A problem file is one JSON object; every key except ``rank`` is optional::

    {"rank": 2,
     "valuation_cone": {"generators": [...]} | {"inequalities": [...], "equations": [...]},
     "colors": [{"name": "D1", "rho": [1, 2]}],
     "rays": [[-1, -1], [1, -1]],
     "kernel": [[...], ...],
     "fan": {"cones": [{"rays": [[...]], "colors": ["D1"]}]},
     "psi_fan": [{"I": ["D1"], "J": [1]}],
     "bunch": [{"I": [], "J": [1, 2]}],
     "multiplicities": {"D1": 2}}

Numbers are integers or ``"p/q"`` strings.  Errors carry the JSON pointer
of the offending value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .colored import ColoredCone, ColoredFan
from .cone import Cone, cone_from_generators, cone_from_inequalities, full_space
from .datum import SphericalDatum, make_datum
from .errors import SchemaError, SphfanError
from .gale import DEFAULT_CAP, PhiCone, PsiCone, PsiConfiguration
from .rational import as_fraction, format_rational, primitive_vector

_TOP_KEYS = {"rank", "valuation_cone", "colors", "rays", "kernel", "fan", "psi_fan", "bunch",
             "multiplicities", "description"}


@dataclass
class Problem:
    datum: SphericalDatum
    rays: list | None = None
    kernel: list | None = None
    fan: list | None = None            # ColoredCone list, not yet validated as a fan
    psi_fan: list | None = None        # (color indices, 0-based ray indices) pairs
    bunch: list | None = None
    multiplicities: list | None = None

    def configuration(self, cap: int = DEFAULT_CAP) -> PsiConfiguration:
        if self.rays is None:
            raise SchemaError("/rays", "this command needs a ray configuration")
        return PsiConfiguration(self.datum, self.rays, kernel=self.kernel, cap=cap)

    def colored_fan(self) -> ColoredFan:
        if self.fan is None:
            raise SchemaError("/fan", "this command needs a colored fan")
        return ColoredFan(self.datum, tuple(self.fan))


def _type(ptr, value, kind, what):
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(ptr, f"expected {what}")
    return value


def _rational(ptr, x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(ptr, "expected an integer or a 'p/q' string")
    try:
        return as_fraction(x)
    except (TypeError, ValueError) as exc:
        raise SchemaError(ptr, str(exc)) from None


def _vector(ptr, v, dim) -> list[Fraction]:
    _type(ptr, v, list, "an array")
    if len(v) != dim:
        raise SchemaError(ptr, f"expected {dim} entries, got {len(v)}")
    return [_rational(f"{ptr}/{i}", x) for i, x in enumerate(v)]


def _lattice_ray(ptr, v, dim) -> tuple[int, ...]:
    vec = _vector(ptr, v, dim)
    if not any(vec):
        raise SchemaError(ptr, "ray must be nonzero")
    return primitive_vector(vec)


def _vectors(ptr, vs, dim):
    _type(ptr, vs, list, "an array")
    return [_vector(f"{ptr}/{i}", v, dim) for i, v in enumerate(vs)]


def parse_problem(obj: Any) -> Problem:
    _type("", obj, dict, "a JSON object")
    unknown = sorted(set(obj) - _TOP_KEYS)
    if unknown:
        raise SchemaError(f"/{unknown[0]}", "unknown key")
    if "rank" not in obj:
        raise SchemaError("/rank", "missing")
    n = _type("/rank", obj["rank"], int, "an integer")
    if n < 0:
        raise SchemaError("/rank", "must be nonnegative")

    vc = obj.get("valuation_cone")
    if vc is None:
        V = full_space(n)
    else:
        _type("/valuation_cone", vc, dict, "an object")
        if "generators" in vc:
            V = cone_from_generators(n, _vectors("/valuation_cone/generators", vc["generators"], n))
        elif "inequalities" in vc:
            V = cone_from_inequalities(n, _vectors("/valuation_cone/inequalities", vc["inequalities"], n),
                                       _vectors("/valuation_cone/equations", vc.get("equations", []), n))
        else:
            raise SchemaError("/valuation_cone", "needs 'generators' or 'inequalities'")

    colors = []
    names = []
    for i, c in enumerate(_type("/colors", obj.get("colors", []), list, "an array")):
        ptr = f"/colors/{i}"
        _type(ptr, c, dict, "an object")
        name = _type(f"{ptr}/name", c.get("name"), str, "a string")
        if name in names:
            raise SchemaError(f"{ptr}/name", f"duplicate color name {name!r}")
        rho = _vector(f"{ptr}/rho", c.get("rho"), n)
        if any(x.denominator != 1 for x in rho):
            raise SchemaError(f"{ptr}/rho", "rho must be an integer vector")
        names.append(name)
        colors.append((name, [int(x) for x in rho]))
    datum = make_datum(n, V, colors)
    problem = Problem(datum)

    if "rays" in obj:
        _type("/rays", obj["rays"], list, "an array")
        problem.rays = [_lattice_ray(f"/rays/{j}", u, n) for j, u in enumerate(obj["rays"])]
    if "kernel" in obj:
        m = len(colors) + len(problem.rays or [])
        problem.kernel = _vectors("/kernel", obj["kernel"], m)

    if "fan" in obj:
        fan = _type("/fan", obj["fan"], dict, "an object")
        cones = _type("/fan/cones", fan.get("cones"), list, "an array")
        if not cones:
            raise SchemaError("/fan/cones", "a colored fan must be nonempty")
        problem.fan = []
        for i, c in enumerate(cones):
            ptr = f"/fan/cones/{i}"
            _type(ptr, c, dict, "an object")
            rays = [_lattice_ray(f"{ptr}/rays/{j}", u, n)
                    for j, u in enumerate(_type(f"{ptr}/rays", c.get("rays", []), list, "an array"))]
            cols = _type(f"{ptr}/colors", c.get("colors", []), list, "an array")
            for j, name in enumerate(cols):
                if name not in names:
                    raise SchemaError(f"{ptr}/colors/{j}", f"unknown color {name!r}")
            gens = datum.rho_images(sorted(set(cols))) + rays
            problem.fan.append(ColoredCone(cone_from_generators(n, gens), frozenset(cols)))

    for key in ("psi_fan", "bunch"):
        if key in obj:
            items = _type(f"/{key}", obj[key], list, "an array")
            setattr(problem, key, [_index_pair(f"/{key}/{i}", it, names, problem.rays)
                                   for i, it in enumerate(items)])

    if "multiplicities" in obj:
        mult = _type("/multiplicities", obj["multiplicities"], dict, "an object")
        for name in mult:
            if name not in names:
                raise SchemaError(f"/multiplicities/{name}", "unknown color")
        problem.multiplicities = [
            _type(f"/multiplicities/{name}", mult.get(name, 2), int, "an integer") for name in names]
    return problem


def _index_pair(ptr, item, names, rays):
    _type(ptr, item, dict, "an object")
    I = []
    for j, name in enumerate(_type(f"{ptr}/I", item.get("I", []), list, "an array")):
        if name not in names:
            raise SchemaError(f"{ptr}/I/{j}", f"unknown color {name!r}")
        I.append(names.index(name))
    J = []
    n = len(rays or [])
    for j, idx in enumerate(_type(f"{ptr}/J", item.get("J", []), list, "an array")):
        _type(f"{ptr}/J/{j}", idx, int, "a 1-based ray index")
        if not 1 <= idx <= n:
            raise SchemaError(f"{ptr}/J/{j}", f"ray index {idx} out of range 1..{n}")
        J.append(idx - 1)
    return sorted(set(I)), sorted(set(J))


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"malformed JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    try:
        return parse_problem(obj)
    except SchemaError:
        raise
    except SphfanError as exc:
        raise SchemaError("", str(exc)) from None


# -- output -------------------------------------------------------------------

def vector_json(v) -> list[str]:
    return [format_rational(x) for x in v]


def cone_json(c: Cone) -> dict:
    return {"rays": [vector_json(g) for g in c.rays],
            "lineality": [vector_json(g) for g in c.lineality]}


def colored_cone_json(s: ColoredCone) -> dict:
    return {"rays": [vector_json(g) for g in s.cone.generators], "colors": sorted(s.colors)}


def colored_fan_json(cones) -> dict:
    return {"cones": [colored_cone_json(s) for s in cones]}


def index_pair_json(conf: PsiConfiguration, mask: int, c: Cone | None = None) -> dict:
    out = conf.describe(mask)
    if c is not None:
        out["cone"] = cone_json(c)
    return out


def psi_cone_json(conf: PsiConfiguration, s: PsiCone) -> dict:
    return index_pair_json(conf, s.mask, s.cone)


def phi_cone_json(conf: PsiConfiguration, t: PhiCone) -> dict:
    return index_pair_json(conf, t.mask, t.cone)


def problem_json(problem: Problem) -> dict:
    """Inverse of :func:`parse_problem` (up to the canonical forms)."""
    d = problem.datum
    out: dict = {"rank": d.rank,
                 "colors": [{"name": c.name, "rho": list(c.rho)} for c in d.colors]}
    V = d.valuation_cone
    out["valuation_cone"] = {"generators": [vector_json(g) for g in V.generators]}
    if problem.rays is not None:
        out["rays"] = [list(u) for u in problem.rays]
    if problem.kernel is not None:
        out["kernel"] = [vector_json(row) for row in problem.kernel]
    if problem.fan is not None:
        out["fan"] = colored_fan_json(problem.fan)
    for key in ("psi_fan", "bunch"):
        val = getattr(problem, key)
        if val is not None:
            out[key] = [{"I": [d.colors[i].name for i in I], "J": [j + 1 for j in J]} for I, J in val]
    if problem.multiplicities is not None:
        out["multiplicities"] = {c.name: s for c, s in zip(d.colors, problem.multiplicities)}
    return out


def emit_report(result: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, rationals as strings."""
    return json.dumps(_plain(result), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _plain(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Cone):
        return cone_json(x)
    if isinstance(x, ColoredCone):
        return colored_cone_json(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
