"""Shared test material: the worked configurations and hypothesis strategies."""

from pathlib import Path

from hypothesis import strategies as st

from sphfan.colored import ColoredCone, ColoredFan
from sphfan.cone import cone_from_generators, cone_from_inequalities
from sphfan.datum import make_datum
from sphfan.gale import build_configuration

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

P2_RAYS = [(1, 0), (0, 1), (-1, -1)]
P1P1_RAYS = [(1, 0), (-1, 0), (0, 1), (0, -1)]


def hirzebruch_rays(k):
    return [(1, 0), (0, 1), (-1, k), (0, -1)]


def excol_datum():
    return make_datum(1, cone_from_generators(1, [(-1,)]), [("D1", (1,)), ("D2", (1,))])


def excol():
    return build_configuration(excol_datum(), [(-1,)])


def exa2_datum(V=None):
    if V is None:
        V = cone_from_inequalities(2, [(0, -1)])
    return make_datum(2, V, [("D1", (1, 2)), ("D2", (-1, 2))])


def exa2():
    return build_configuration(exa2_datum(), [(-1, -1), (1, -1)])


def toric(rays):
    return build_configuration(make_datum(2), rays)


def p2():
    return toric(P2_RAYS)


def cc(d, gens, colors=()):
    """Colored cone generated by ``gens`` (including the rho images)."""
    return ColoredCone(cone_from_generators(d.rank, gens), frozenset(colors))


def exa2_fan_cones(d):
    return [cc(d, []), cc(d, [(-1, -1)]), cc(d, [(1, -1)]),
            cc(d, [(1, 2), (-1, -1)], ["D1"]), cc(d, [(-1, 2), (1, -1)], ["D2"])]


def toric_fan(rays, maximal):
    d = make_datum(2)
    cones = [cc(d, [])] + [cc(d, [u]) for u in rays]
    cones += [cc(d, [rays[a], rays[b]]) for a, b in maximal]
    return ColoredFan(d, tuple(cones))


def p2_fan():
    return toric_fan(P2_RAYS, [(0, 1), (1, 2), (0, 2)])


FIXED_CONFIGURATIONS = {
    "ex-col": excol,
    "p2": p2,
    "p1xp1": lambda: toric(P1P1_RAYS),
    "hirzebruch-0": lambda: toric(hirzebruch_rays(0)),
    "hirzebruch-1": lambda: toric(hirzebruch_rays(1)),
    "hirzebruch-2": lambda: toric(hirzebruch_rays(2)),
    "ex-a2": exa2,
}


def int_vectors(dim, bound=4, nonzero=False):
    s = st.tuples(*[st.integers(-bound, bound)] * dim)
    return s.filter(any) if nonzero else s


@st.composite
def cones(draw, max_dim=3, max_gens=4, bound=4):
    dim = draw(st.integers(1, max_dim))
    gens = draw(st.lists(int_vectors(dim, bound), max_size=max_gens))
    return cone_from_generators(dim, gens)


@st.composite
def cone_pairs(draw, max_dim=3, max_gens=4, bound=4):
    dim = draw(st.integers(1, max_dim))
    a = draw(st.lists(int_vectors(dim, bound), max_size=max_gens))
    b = draw(st.lists(int_vectors(dim, bound), max_size=max_gens))
    return cone_from_generators(dim, a), cone_from_generators(dim, b)


@st.composite
def unimodular(draw, dim):
    """Product of random elementary integer matrices (determinant +-1)."""
    m = [[int(i == j) for j in range(dim)] for i in range(dim)]
    for _ in range(draw(st.integers(0, 4))):
        if dim < 2:
            break
        i, j = draw(st.permutations(range(dim)))[:2]
        f = draw(st.integers(-2, 2))
        m = [row[:] for row in m]
        for r in range(dim):
            m[r][i] += f * m[r][j]
    if draw(st.booleans()):
        m = [[-x for x in row] for row in m]
    return m


def apply(m, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)
