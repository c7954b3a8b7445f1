"""Psi-cones, phi-cones and the two sharp operations.

A :class:`PsiConfiguration` fixes the vectors ``d_1..d_r`` (images of the
colors) and ``u_1..u_n`` (primitive ray generators in the valuation cone).
The map psi sends the standard basis of ``Q^(r+n)`` to these vectors; phi is
its Gale dual, read off from a basis of ``ker(psi)``: column ``i`` of the
phi matrix is the ``i``-th coordinate of every kernel basis vector.

Index pairs ``(I, J)`` are encoded as bit masks over ``r + n`` positions:
bit ``i`` (``i < r``) is the color ``D_{i+1}``, bit ``r + j`` the ray
``Y_{j+1}``.  Both sharp maps run over all ``2^(r+n)`` masks and compare the
realized objects geometrically, because different index pairs may realize
the same psi-cone or phi-cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .colored import ColoredCone, ColoredFan, spans_by_rank_and_lp
from .cone import (
    Cone,
    Limits,
    cone_from_generators,
    cone_predicates,
    contains,
    faces,
    relint_common_point,
    relint_meets,
    relint_subset,
)
from .datum import SphericalDatum
from .errors import ConfigurationError, DimensionError, LimitExceeded
from .rational import dot, kernel_basis, primitive_vector, rank
from .report import Report

DEFAULT_CAP = 12
MAX_RANK = 6


@dataclass(frozen=True)
class PsiCone:
    """``(cone(psi(I + J)), I)``; identity ignores the realizing ``J``."""

    cone: Cone
    I: frozenset
    mask: int = field(default=0, compare=False)

    def sort_key(self):
        return (self.cone.sort_key(), tuple(sorted(self.I)))


@dataclass(frozen=True)
class PhiCone:
    """``cone(phi(I + J))``; identity is the geometric cone alone."""

    cone: Cone
    mask: int = field(default=0, compare=False)

    def sort_key(self):
        return self.cone.sort_key()


class Support(NamedTuple):
    supported: bool
    witness: object = None


class PsiConfiguration:
    def __init__(self, datum: SphericalDatum, rays: Sequence[Sequence[int]],
                 kernel: Sequence[Sequence] | None = None, cap: int = DEFAULT_CAP):
        r, n = len(datum.colors), len(rays)
        if r + n > cap:
            raise LimitExceeded(f"r + n = {r + n} exceeds cap {cap}")
        if datum.rank > MAX_RANK:
            raise LimitExceeded(f"rank {datum.rank} exceeds cap {MAX_RANK}")
        rays = [tuple(int(x) for x in u) for u in rays]
        for j, u in enumerate(rays, 1):
            if len(u) != datum.rank:
                raise DimensionError(f"ray {j} has length {len(u)}, expected {datum.rank}")
            if not any(u) or primitive_vector(u) != u:
                raise ConfigurationError(f"ray {j} is not a primitive lattice vector")
            if not contains(datum.valuation_cone, u):
                raise ConfigurationError(f"rays not in valuation cone (ray {j})")
        if len(set(rays)) != len(rays):
            raise ConfigurationError("rays must span pairwise distinct rays")
        self.datum = datum
        self.rays = tuple(rays)
        self.r, self.n = r, n
        self.m = r + n
        self.columns = tuple(c.rho for c in datum.colors) + self.rays
        self.psi_matrix = tuple(tuple(col[t] for col in self.columns) for t in range(datum.rank))
        if not spans_by_rank_and_lp(datum.rank, self.columns):
            raise ConfigurationError("configuration does not span (global-sections hypothesis violated): "
                                     "the colors and rays must generate the lattice space as a cone")
        if kernel is None:
            kernel = kernel_basis(self.psi_matrix, self.m) if datum.rank else _identity(self.m)
        kernel = tuple(tuple(row) for row in kernel)
        expected = self.m - (rank(self.psi_matrix, self.m) if datum.rank else 0)
        if len(kernel) != expected or (kernel and rank(kernel, self.m) != expected):
            raise ConfigurationError("kernel rows are not a basis of ker(psi)")
        for row in kernel:
            if any(dot(p, row) != 0 for p in self.psi_matrix):
                raise ConfigurationError("kernel row not annihilated by psi")
        self.kernel = kernel
        self.k = len(kernel)
        self.phi_columns = tuple(tuple(row[i] for row in kernel) for i in range(self.m))
        self.phi_matrix = kernel
        self.full = (1 << self.m) - 1
        self.color_mask = (1 << r) - 1
        self.limits = Limits(max_generators=max(16, self.m), max_dimension=max(8, self.m, datum.rank))
        self._psi: dict[int, PsiCone] = {}
        self._phi: dict[int, PhiCone] = {}
        self._support: dict[PsiCone, Support] = {}
        self._phi_groups: dict[Cone, list[int]] | None = None
        self._psi_groups: dict[PsiCone, list[int]] | None = None
        self._cache: dict = {}

    # -- labels ---------------------------------------------------------
    @property
    def labels(self) -> tuple[str, ...]:
        return self.datum.color_names + tuple(f"Y{j + 1}" for j in range(self.n))

    def split(self, mask: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """0-based color indices and ray indices of a mask."""
        I = tuple(i for i in range(self.r) if mask >> i & 1)
        J = tuple(j for j in range(self.n) if mask >> (self.r + j) & 1)
        return I, J

    def mask_of(self, I: Iterable[int] = (), J: Iterable[int] = ()) -> int:
        mask = 0
        for i in I:
            if not 0 <= i < self.r:
                raise IndexError(f"color index {i} out of range")
            mask |= 1 << i
        for j in J:
            if not 0 <= j < self.n:
                raise IndexError(f"ray index {j} out of range")
            mask |= 1 << (self.r + j)
        return mask

    def complement(self, mask: int) -> int:
        return self.full ^ mask

    def describe(self, mask: int) -> dict:
        I, J = self.split(mask)
        return {"I": [self.datum.colors[i].name for i in I], "J": [j + 1 for j in J]}

    # -- realized cones -------------------------------------------------
    def psi(self, mask: int) -> PsiCone:
        got = self._psi.get(mask)
        if got is None:
            gens = [self.columns[i] for i in range(self.m) if mask >> i & 1]
            cone = cone_from_generators(self.datum.rank, gens, limits=self.limits)
            got = PsiCone(cone, frozenset(self.split(mask)[0]), mask)
            self._psi[mask] = got
        return got

    def phi(self, mask: int) -> PhiCone:
        got = self._phi.get(mask)
        if got is None:
            gens = [self.phi_columns[i] for i in range(self.m) if mask >> i & 1]
            got = PhiCone(cone_from_generators(self.k, gens, limits=self.limits), mask)
            self._phi[mask] = got
        return got

    def psi_support(self, sigma: PsiCone) -> Support:
        got = self._support.get(sigma)
        if got is None:
            w = relint_meets(sigma.cone, self.datum.valuation_cone)
            got = Support(w is not None, w)
            self._support[sigma] = got
        return got

    def relints_meet(self, a: Cone, b: Cone) -> bool:
        """Memoized ``relint(a) & relint(b) != {}``."""
        if a == b:
            return True
        key = ("meet", frozenset((a, b)))
        got = self._cache.get(key)
        if got is None:
            got = self._cache[key] = relint_common_point(a, b) is not None
        return got

    def relint_within(self, a: Cone, b: Cone) -> bool:
        """Memoized ``relint(a) <= relint(b)``."""
        key = ("sub", a, b)
        got = self._cache.get(key)
        if got is None:
            got = self._cache[key] = relint_subset(a, b)
        return got

    def masks(self) -> range:
        return range(1 << self.m)

    def phi_groups(self) -> dict[Cone, list[int]]:
        """Geometric phi-cone -> all masks realizing it (ascending)."""
        if self._phi_groups is None:
            groups: dict[Cone, list[int]] = {}
            for mask in self.masks():
                groups.setdefault(self.phi(mask).cone, []).append(mask)
            self._phi_groups = groups
        return self._phi_groups

    def psi_groups(self) -> dict[PsiCone, list[int]]:
        """Psi-cone -> all masks realizing it (ascending)."""
        if self._psi_groups is None:
            groups: dict[PsiCone, list[int]] = {}
            for mask in self.masks():
                groups.setdefault(self.psi(mask), []).append(mask)
            self._psi_groups = groups
        return self._psi_groups

    def realizations(self, sigma: PsiCone) -> list[int]:
        return list(self.psi_groups().get(sigma, []))

    def colored(self, sigma: PsiCone) -> ColoredCone:
        return ColoredCone(sigma.cone, frozenset(self.datum.colors[i].name for i in sigma.I))


def _identity(m):
    return tuple(tuple(int(i == j) for j in range(m)) for i in range(m))


def build_configuration(d: SphericalDatum, rays: Sequence[Sequence[int]],
                        kernel: Sequence[Sequence] | None = None, cap: int = DEFAULT_CAP) -> PsiConfiguration:
    return PsiConfiguration(d, rays, kernel=kernel, cap=cap)


def psi_cone(conf: PsiConfiguration, I: Iterable[int] = (), J: Iterable[int] = ()) -> PsiCone:
    return conf.psi(conf.mask_of(I, J))


def phi_cone(conf: PsiConfiguration, I: Iterable[int] = (), J: Iterable[int] = ()) -> PhiCone:
    return conf.phi(conf.mask_of(I, J))


def is_supported_psi(conf: PsiConfiguration, sigma: PsiCone) -> Support:
    return conf.psi_support(sigma)


def is_supported_phi(conf: PsiConfiguration, tau: PhiCone) -> Support:
    """Some realization ``(I, J)`` of ``tau`` has a supported complement psi-cone.

    The witness is the realizing mask of ``tau`` whose complement works.
    """
    for mask in conf.phi_groups().get(tau.cone, []):
        if conf.psi_support(conf.psi(conf.complement(mask))).supported:
            return Support(True, mask)
    return Support(False, None)


def _dedup(items, key):
    seen = {}
    for it in items:
        seen.setdefault(it, it)
    return sorted(seen.values(), key=key)


def sharp_fan_to_bunch(conf: PsiConfiguration, sigmas: Iterable[PsiCone]) -> list[PhiCone]:
    wanted = set(sigmas)
    out = []
    for mask in conf.masks():
        if conf.psi(mask) in wanted:
            c = conf.complement(mask)
            out.append(PhiCone(conf.phi(c).cone, c))
    return _dedup(out, PhiCone.sort_key)


def sharp_bunch_to_fan(conf: PsiConfiguration, taus: Iterable[PhiCone]) -> list[PsiCone]:
    wanted = {t.cone for t in taus}
    out = []
    for mask in conf.masks():
        if conf.phi(mask).cone in wanted:
            c = conf.complement(mask)
            s = conf.psi(c)
            out.append(PsiCone(s.cone, s.I, c))
    return _dedup(out, PsiCone.sort_key)


def prune_unsupported(conf: PsiConfiguration, sigmas: Iterable[PsiCone]) -> list[PsiCone]:
    return [s for s in sigmas if conf.psi_support(s).supported]


class PsiPredicates(NamedTuple):
    pointed: bool
    simplicial: bool


def psi_cone_predicates(conf: PsiConfiguration, sigma: PsiCone) -> PsiPredicates:
    colors = [conf.columns[i] for i in sorted(sigma.I)]
    pointed = sigma.cone.is_pointed and all(any(v) for v in colors)
    simplicial = False
    if pointed and cone_predicates(sigma.cone).is_simplicial:
        # each psi(D), D in F, must itself span an extreme ray, and distinct
        # colors must land on distinct rays (so some basis of the span,
        # made of extreme-ray generators, contains psi(F) verbatim)
        rays = set(sigma.cone.rays)
        prims = [primitive_vector(v) for v in colors]
        simplicial = all(p in rays for p in prims) and len(set(prims)) == len(prims)
    return PsiPredicates(pointed, simplicial)


def supported_faces(conf: PsiConfiguration, sigma: PsiCone) -> list[PsiCone]:
    """Colored faces of ``sigma`` whose relative interior meets V (``sigma`` included)."""
    key = ("faces", sigma)
    if key not in conf._cache:
        conf._cache[key] = _supported_faces(conf, sigma)
    return conf._cache[key]


def _supported_faces(conf, sigma):
    mask = sigma.mask if conf.psi(sigma.mask) == sigma else conf.realizations(sigma)[0]
    out = []
    for face in faces(sigma.cone):
        sub = 0
        for i in range(conf.m):
            if mask >> i & 1 and contains(face, conf.columns[i]):
                sub |= 1 << i
        tau = conf.psi(sub)
        assert tau.cone == face
        if conf.psi_support(tau).supported:
            out.append(tau)
    return sorted(out, key=PsiCone.sort_key)


def required_psi_cones(conf: PsiConfiguration) -> list[PsiCone]:
    req = [conf.psi(0)] if conf.r else []
    req += [conf.psi(conf.mask_of(J=[j])) for j in range(conf.n)]
    return req


def required_phi_cones(conf: PsiConfiguration) -> list[PhiCone]:
    req = [conf.phi(conf.full)] if conf.r else []
    req += [conf.phi(conf.full ^ conf.mask_of(J=[j])) for j in range(conf.n)]
    return req


def _unique(items):
    return list(dict.fromkeys(items))


def is_psi_quasifan(conf: PsiConfiguration, sigmas: Iterable[PsiCone]) -> Report:
    sigmas = sorted(_unique(sigmas), key=PsiCone.sort_key)
    report = Report()
    if not sigmas:
        return report.fail("a psi-quasifan must be nonempty")
    members = set(sigmas)
    for s in sigmas:
        if not conf.psi_support(s).supported:
            report.fail(f"{_show(conf, s)} is not supported")
    if not report.ok:
        return report
    for s in sigmas:
        for f in supported_faces(conf, s):
            if f not in members:
                report.fail(f"supported face {_show(conf, f)} of {_show(conf, s)} is missing")
    for a, b in itertools.combinations(sigmas, 2):
        if conf.relints_meet(a.cone, b.cone):
            v = relint_common_point(a.cone, b.cone)
            report.fail(f"relative interiors of {_show(conf, a)} and {_show(conf, b)} meet",
                        witness={"cones": (a, b), "v": v})
    return report


def is_psi_fan(conf: PsiConfiguration, sigmas: Iterable[PsiCone]) -> Report:
    sigmas = _unique(sigmas)
    report = is_psi_quasifan(conf, sigmas)
    for s in sigmas:
        if not psi_cone_predicates(conf, s).pointed:
            report.fail(f"{_show(conf, s)} is not pointed")
    return report


def supported_pointed_psi_cones(conf: PsiConfiguration) -> list[PsiCone]:
    if "spp" in conf._cache:
        return conf._cache["spp"]
    out = [s for s in conf.psi_groups()
           if conf.psi_support(s).supported and psi_cone_predicates(conf, s).pointed]
    conf._cache["spp"] = sorted(out, key=PsiCone.sort_key)
    return conf._cache["spp"]


def supported_phi_cones(conf: PsiConfiguration) -> list[PhiCone]:
    if "sphi" in conf._cache:
        return conf._cache["sphi"]
    out = []
    for cone, masks in conf.phi_groups().items():
        t = PhiCone(cone, masks[0])
        w = is_supported_phi(conf, t)
        if w.supported:
            out.append(PhiCone(cone, w.witness))
    conf._cache["sphi"] = sorted(out, key=PhiCone.sort_key)
    return conf._cache["sphi"]


def psi_addable(conf: PsiConfiguration, members: set, sigma: PsiCone) -> bool:
    """``members + {sigma}`` is still a psi-fan (``members`` assumed to be one)."""
    if sigma in members:
        return False
    if any(f not in members and f != sigma for f in supported_faces(conf, sigma)):
        return False
    return not any(conf.relints_meet(sigma.cone, s.cone) for s in members)


def is_true_psi_fan(conf: PsiConfiguration, sigmas: Iterable[PsiCone]) -> Report:
    members = set(sigmas)
    report = Report()
    for req in required_psi_cones(conf):
        if req not in members:
            report.fail(f"required cone {_show(conf, req)} is missing")
    return report


def is_true_maximal_psi_fan(conf: PsiConfiguration, sigmas: Iterable[PsiCone]) -> Report:
    sigmas = _unique(sigmas)
    report = is_psi_fan(conf, sigmas)
    if not report:
        return report
    true = is_true_psi_fan(conf, sigmas)
    for e in true.errors:
        report.fail(e)
    members = set(sigmas)
    for cand in supported_pointed_psi_cones(conf):
        if psi_addable(conf, members, cand):
            report.fail(f"not maximal: {_show(conf, cand)} can be added", witness={"addable": cand})
            break
    return report


def is_phi_bunch(conf: PsiConfiguration, taus: Iterable[PhiCone]) -> Report:
    taus = sorted(_unique(taus), key=PhiCone.sort_key)
    report = Report()
    if not taus:
        return report.fail("a phi-bunch must be nonempty")
    supported = supported_phi_cones(conf)
    supported_set = {t.cone for t in supported}
    for t in taus:
        if t.cone not in supported_set:
            report.fail(f"phi-cone {list(t.cone.generators)} is not supported")
    if not report.ok:
        return report
    for a, b in itertools.combinations(taus, 2):
        if not conf.relints_meet(a.cone, b.cone):
            report.fail(f"relative interiors of {list(a.cone.generators)} and "
                        f"{list(b.cone.generators)} are disjoint")
    members = {t.cone for t in taus}
    for t1 in taus:
        for t in supported:
            if t.cone not in members and conf.relint_within(t1.cone, t.cone):
                report.fail(f"{list(t.cone.generators)} has larger relative interior than a member "
                            f"but is missing")
    return report


def up_closure(conf: PsiConfiguration, tau: PhiCone) -> list[PhiCone]:
    return [t for t in supported_phi_cones(conf) if conf.relint_within(tau.cone, t.cone)]


def is_true_phi_bunch(conf: PsiConfiguration, taus: Iterable[PhiCone]) -> Report:
    members = {t.cone for t in taus}
    report = Report()
    for req in required_phi_cones(conf):
        if req.cone not in members:
            report.fail(f"required phi-cone {list(req.cone.generators)} is missing")
    return report


def is_true_maximal_phi_bunch(conf: PsiConfiguration, taus: Iterable[PhiCone]) -> Report:
    taus = _unique(taus)
    report = is_phi_bunch(conf, taus)
    if not report:
        return report
    for e in is_true_phi_bunch(conf, taus).errors:
        report.fail(e)
    members = {t.cone for t in taus}
    for cand in supported_phi_cones(conf):
        if cand.cone in members:
            continue
        extended = _unique(list(taus) + up_closure(conf, cand))
        if is_phi_bunch(conf, extended):
            report.fail(f"not maximal: {list(cand.cone.generators)} can be added", witness={"addable": cand})
            break
    return report


def psi_fan_to_colored_fan(conf: PsiConfiguration, sigmas: Iterable[PsiCone]) -> ColoredFan:
    return ColoredFan(conf.datum, tuple(conf.colored(s) for s in sigmas))


def _show(conf: PsiConfiguration, s: PsiCone) -> str:
    names = sorted(conf.datum.colors[i].name for i in s.I)
    return f"({list(s.cone.generators)}, {names})"
