"""Exhaustive enumeration of true maximal psi-fans and phi-bunches, and the
executable checks built on top of them (duality bijection, A2 pipeline)."""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

from .colored import (
    ColoredFan,
    complete_for_global_sections,
    has_a2_property,
    validate_colored_fan,
)
from .cone import contains
from .datum import SphericalDatum, make_datum
from .errors import ConfigurationError, PreconditionError, SphfanError
from .gale import (
    DEFAULT_CAP,
    PhiCone,
    PsiConfiguration,
    PsiCone,
    is_psi_fan,
    is_true_maximal_phi_bunch,
    is_true_maximal_psi_fan,
    prune_unsupported,
    psi_addable,
    psi_cone_predicates,
    psi_fan_to_colored_fan,
    required_phi_cones,
    required_psi_cones,
    sharp_bunch_to_fan,
    sharp_fan_to_bunch,
    supported_faces,
    supported_phi_cones,
    supported_pointed_psi_cones,
)


def warm_up(conf: PsiConfiguration, workers: int = 1) -> None:
    """Realize every psi-/phi-cone of ``conf``, optionally on a thread pool.

    Only the cache filling is parallel; everything downstream iterates in
    mask order, so results do not depend on ``workers``.
    """
    def one(mask):
        s = conf.psi(mask)
        conf.phi(mask)
        conf.psi_support(s)
        return mask

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one, conf.masks()))
    else:
        for mask in conf.masks():
            one(mask)


def enumerate_supported_psi_cones(conf: PsiConfiguration, workers: int = 1) -> list[PsiCone]:
    warm_up(conf, workers)
    groups = conf.psi_groups()
    out = [PsiCone(s.cone, s.I, masks[0]) for s, masks in groups.items() if conf.psi_support(s).supported]
    return sorted(out, key=PsiCone.sort_key)


def enumerate_supported_phi_cones(conf: PsiConfiguration, workers: int = 1) -> list[PhiCone]:
    warm_up(conf, workers)
    return list(supported_phi_cones(conf))


def _order_by_dimension(cones):
    return sorted(cones, key=lambda s: (s.cone.rank,) + tuple(s.sort_key()))


def enumerate_true_maximal_psi_fans(conf: PsiConfiguration, workers: int = 1) -> list[list[PsiCone]]:
    """All true maximal psi-fans, by backtracking over supported pointed psi-cones.

    Candidates are visited in order of dimension, so every face is decided
    before the cones containing it.  A cone that could still be added when it
    is skipped is remembered; a leaf is kept only if each remembered cone has
    meanwhile been blocked by a conflicting member.
    """
    warm_up(conf, workers)
    cands = _order_by_dimension(supported_pointed_psi_cones(conf))
    index = {s: i for i, s in enumerate(cands)}
    N = len(cands)
    required = required_psi_cones(conf)
    if any(s not in index for s in required):
        return []
    face_idx = [[index[f] for f in supported_faces(conf, s) if f != s] for s in cands]
    conflict = [[False] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            c = conf.relints_meet(cands[i].cone, cands[j].cone)
            conflict[i][j] = conflict[j][i] = c
    seeds = set()
    stack = [index[s] for s in required]
    while stack:
        x = stack.pop()
        if x not in seeds:
            seeds.add(x)
            stack.extend(face_idx[x])
    if any(conflict[a][b] for a in seeds for b in seeds if a != b):
        return []

    results = []

    def blocked_later(x, pos, included):
        return any(conflict[x][y] for y in included) or any(conflict[x][z] for z in range(pos, N))

    def rec(pos, included, pending):
        for x in pending:
            if not blocked_later(x, pos, included):
                return
        if pos == N:
            results.append(sorted((cands[i] for i in included), key=PsiCone.sort_key))
            return
        if pos in seeds:
            rec(pos + 1, included, pending)
            return
        can = all(f in included for f in face_idx[pos]) and not any(conflict[pos][y] for y in included)
        if can:
            rec(pos + 1, included | {pos}, pending)
            rec(pos + 1, included, pending + [pos])
        else:
            rec(pos + 1, included, pending)

    rec(0, frozenset(seeds), [])
    return sorted(results, key=lambda fan: [s.sort_key() for s in fan])


def enumerate_true_maximal_phi_bunches(conf: PsiConfiguration, workers: int = 1) -> list[list[PhiCone]]:
    """All true maximal phi-bunches.

    Pairwise intersecting relative interiors are preserved by enlarging a
    relative interior, so maximal bunches are exactly the maximal cliques of
    the "relative interiors meet" graph on supported phi-cones; the required
    cones are seeded and the rest is Bron-Kerbosch with a fixed vertex order.
    """
    warm_up(conf, workers)
    cands = supported_phi_cones(conf)
    index = {t.cone: i for i, t in enumerate(cands)}
    N = len(cands)
    req = []
    for t in required_phi_cones(conf):
        if t.cone not in index:
            return []
        req.append(index[t.cone])
    req = sorted(set(req))
    adj = [set() for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            if conf.relints_meet(cands[i].cone, cands[j].cone):
                adj[i].add(j)
                adj[j].add(i)
    for a in req:
        for b in req:
            if a != b and b not in adj[a]:
                return []
    P = set(range(N)) - set(req)
    for a in req:
        P &= adj[a]
    results = []

    def bk(R, P, X):
        if not P and not X:
            results.append(sorted((cands[i] for i in R), key=PhiCone.sort_key))
            return
        pivot = min(P | X, key=lambda u: (-len(adj[u] & P), u))
        for v in sorted(P - adj[pivot]):
            bk(R | {v}, P & adj[v], X & adj[v])
            P = P - {v}
            X = X | {v}

    if not req and not P:
        return []
    bk(set(req), P, set())
    if not req:
        results = [b for b in results if b]
    return sorted(results, key=lambda b: [t.sort_key() for t in b])


def bunch_to_fan(conf: PsiConfiguration, bunch: Sequence[PhiCone]) -> list[PsiCone]:
    return prune_unsupported(conf, sharp_bunch_to_fan(conf, bunch))


def fan_to_bunch(conf: PsiConfiguration, fan: Sequence[PsiCone]) -> list[PhiCone]:
    return sharp_fan_to_bunch(conf, fan)


@dataclass
class DualityReport:
    ok: bool
    fans: list
    bunches: list
    pairings: list = field(default_factory=list)  # (fan index, bunch index)
    checks: dict = field(default_factory=dict)
    counterexample: Any = None
    seed: int | None = None


def _same_fan(a, b):
    return set(a) == set(b)


def _same_bunch(a, b):
    return {t.cone for t in a} == {t.cone for t in b}


def verify_duality_theorem(conf: PsiConfiguration, workers: int = 1) -> DualityReport:
    """Check that the two sharp maps are mutually inverse bijections between
    true maximal phi-bunches and true maximal psi-fans, matching simplicial
    fans with bunches of full-dimensional cones."""
    fans = enumerate_true_maximal_psi_fans(conf, workers)
    bunches = enumerate_true_maximal_phi_bunches(conf, workers)
    checks = {"fans_valid": True, "bunches_valid": True, "bunch_to_fan_lands": True,
              "fan_to_bunch_lands": True, "inverse": True, "bijection": True,
              "simplicial_fulldim": True, "colored_fan_a2": True}
    report = DualityReport(True, fans, bunches, checks=checks)

    def fail(check, detail):
        if checks[check]:
            checks[check] = False
        if report.counterexample is None:
            report.counterexample = {"check": check, **detail}
        report.ok = False

    for i, f in enumerate(fans):
        r = is_true_maximal_psi_fan(conf, f)
        if not r:
            fail("fans_valid", {"fan": i, "errors": r.errors})
        cf = psi_fan_to_colored_fan(conf, f)
        if not validate_colored_fan(conf.datum, cf.cones) or not has_a2_property(cf).a2:
            fail("colored_fan_a2", {"fan": i})
    for i, b in enumerate(bunches):
        r = is_true_maximal_phi_bunch(conf, b)
        if not r:
            fail("bunches_valid", {"bunch": i, "errors": r.errors})

    fan_image = []
    for i, b in enumerate(bunches):
        f = bunch_to_fan(conf, b)
        j = next((j for j, g in enumerate(fans) if _same_fan(f, g)), None)
        if j is None:
            fail("bunch_to_fan_lands", {"bunch": i, "image": f})
        elif not _same_bunch(fan_to_bunch(conf, f), b):
            fail("inverse", {"bunch": i, "fan": j})
        fan_image.append(j)
    for j, f in enumerate(fans):
        b = fan_to_bunch(conf, f)
        i = next((i for i, c in enumerate(bunches) if _same_bunch(b, c)), None)
        if i is None:
            fail("fan_to_bunch_lands", {"fan": j, "image": b})
        elif not _same_fan(bunch_to_fan(conf, b), f):
            fail("inverse", {"fan": j, "bunch": i})
    if len(fans) != len(bunches) or sorted(x for x in fan_image if x is not None) != list(range(len(fans))):
        fail("bijection", {"fans": len(fans), "bunches": len(bunches)})
    for i, j in enumerate(fan_image):
        if j is None:
            continue
        report.pairings.append((j, i))
        simplicial = all(psi_cone_predicates(conf, s).simplicial for s in fans[j])
        fulldim = all(t.cone.rank == conf.k for t in bunches[i])
        if simplicial != fulldim:
            fail("simplicial_fulldim", {"fan": j, "bunch": i, "simplicial": simplicial, "fulldim": fulldim})
    report.pairings.sort()
    return report


def shrink_counterexample(conf: PsiConfiguration) -> PsiConfiguration:
    """Greedily drop rays and colors while the duality check keeps failing."""
    current = conf
    changed = True
    while changed:
        changed = False
        for kind, count in (("ray", current.n), ("color", current.r)):
            for idx in range(count):
                try:
                    cand = _drop(current, kind, idx)
                except SphfanError:
                    continue
                if not verify_duality_theorem(cand).ok:
                    current, changed = cand, True
                    break
            if changed:
                break
    return current


def _drop(conf, kind, idx):
    d = conf.datum
    if kind == "ray":
        return PsiConfiguration(d, [u for j, u in enumerate(conf.rays) if j != idx])
    colors = [(c.name, c.rho) for i, c in enumerate(d.colors) if i != idx]
    return PsiConfiguration(make_datum(d.rank, d.valuation_cone, colors), conf.rays)


# -- the A2 pipeline ------------------------------------------------------

def fan_as_psi_cones(conf: PsiConfiguration, fan: ColoredFan) -> list[PsiCone]:
    """Realize each member ``(C, F)`` as ``(cone(psi(F + J)), F)`` with ``J`` all rays in ``C``."""
    out = []
    for s in fan.cones:
        I = [conf.datum.color_index(n) for n in s.colors]
        J = [j for j, u in enumerate(conf.rays) if contains(s.cone, u)]
        sigma = conf.psi(conf.mask_of(I, J))
        if sigma.cone != s.cone:
            raise PreconditionError(f"member {s!r} is not generated by its colors and the configuration rays")
        out.append(sigma)
    return out


def extend_to_true_maximal_psi_fan(conf: PsiConfiguration, fan: ColoredFan) -> list[PsiCone] | None:
    """Greedy extension of an A2 colored fan to a true maximal psi-fan.

    Candidates are scanned once in order of dimension; a skipped candidate
    stays blocked (its conflict or its missing face persists), so one pass
    yields a maximal fan.
    """
    if not fan.is_pointed:
        raise PreconditionError("the colored fan must be pointed")
    if not has_a2_property(fan).a2:
        raise PreconditionError("the colored fan does not have the A2-property")
    members = fan_as_psi_cones(conf, fan)
    base = is_psi_fan(conf, members)
    if not base:
        raise PreconditionError("fan is not a psi-fan: " + "; ".join(base.errors))
    current = set(members)
    for req in required_psi_cones(conf):
        if req not in current:
            if not psi_addable(conf, current, req):
                return None
            current.add(req)
    for cand in _order_by_dimension(supported_pointed_psi_cones(conf)):
        if psi_addable(conf, current, cand):
            current.add(cand)
    result = sorted(current, key=PsiCone.sort_key)
    return result if is_true_maximal_psi_fan(conf, result) else None


@dataclass
class A2Certificate:
    a2: bool
    witness: tuple | None = None          # (sigma1, sigma2, v) when a2 is False
    completed: ColoredFan | None = None
    configuration: PsiConfiguration | None = None
    extension: list | None = None


def configuration_for_fan(fan: ColoredFan, cap: int = DEFAULT_CAP) -> PsiConfiguration:
    """Configuration whose rays are the uncolored one-dimensional members of ``fan``."""
    return PsiConfiguration(fan.datum, fan.uncolored_rays(), cap=cap)


def decide_a2(datum: SphericalDatum, fan: ColoredFan, cap: int = DEFAULT_CAP) -> A2Certificate:
    report = validate_colored_fan(datum, fan.cones)
    if not report:
        raise PreconditionError("invalid colored fan: " + "; ".join(report.errors))
    if not fan.is_pointed:
        raise PreconditionError("the colored fan must be pointed")
    res = has_a2_property(fan)
    if not res.a2:
        return A2Certificate(False, witness=res.witness)
    completed = complete_for_global_sections(fan)
    conf = configuration_for_fan(completed, cap=cap)
    ext = extend_to_true_maximal_psi_fan(conf, completed)
    if ext is None:
        raise SphfanError("internal error: an A2 fan could not be extended to a true maximal psi-fan")
    return A2Certificate(True, completed=completed, configuration=conf, extension=ext)


# -- random test material --------------------------------------------------

def _random_vector(rng, dim, entry):
    return tuple(rng.randint(-entry, entry) for _ in range(dim))


def random_datum(rng: random.Random, rank: int, n_colors: int, entry: int = 3) -> SphericalDatum:
    """Datum with a cosimplicial valuation cone ``{<a_i, x> >= 0}`` (independent ``a_i``)."""
    from .cone import cone_from_inequalities, full_space
    from .rational import rank as mat_rank
    k = rng.randint(0, rank)
    normals = []
    while len(normals) < k:
        a = _random_vector(rng, rank, entry)
        if any(a) and mat_rank(normals + [a], rank) == len(normals) + 1:
            normals.append(a)
    V = cone_from_inequalities(rank, normals) if normals else full_space(rank)
    colors = [(f"D{i + 1}", _random_vector(rng, rank, entry)) for i in range(n_colors)]
    return make_datum(rank, V, colors)


def random_configuration(seed: int, max_rank: int = 3, max_colors: int = 2, max_rays: int = 4,
                         entry: int = 3) -> PsiConfiguration:
    """Spanning configuration drawn from ``seed``; non-spanning draws are redrawn."""
    from .rational import primitive_vector
    rng = random.Random(seed)
    rank = rng.randint(1, max_rank)
    while True:
        d = random_datum(rng, rank, rng.randint(0, max_colors), entry)
        n = rng.randint(0, max_rays)
        rays = []
        for _ in range(50):
            if len(rays) == n:
                break
            u = _random_vector(rng, rank, entry)
            if any(u):
                u = primitive_vector(u)
                if u not in rays and contains(d.valuation_cone, u):
                    rays.append(u)
        try:
            return PsiConfiguration(d, rays)
        except ConfigurationError:
            continue
