import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from builders import apply, cc, exa2_datum, exa2_fan_cones, excol_datum, p2_fan, toric_fan, unimodular
from sphfan.colored import (
    ColoredFan,
    colored_faces,
    complete_for_global_sections,
    has_a2_property,
    intersect_in_common_faces,
    is_colored_cone,
    is_pointed_colored_cone,
    make_fan,
    satisfies_global_sections_criterion,
    spanning_vectors,
    spans_by_dual_cone,
    spans_by_rank_and_lp,
    validate_colored_fan,
)
from sphfan.cone import (
    cone_from_generators,
    cone_from_inequalities,
    faces,
    full_space,
    relint_contains,
    zero_cone,
)
from sphfan.datum import is_valuation, make_datum, validate_datum
from sphfan.errors import InvalidDatum, PreconditionError, SphfanError


# -- datum ------------------------------------------------------------------------

def test_toric_datum_is_valid_without_warning():
    r = validate_datum(make_datum(2))
    assert r.ok and not r.warnings


def test_two_color_datum_is_valid():
    d = exa2_datum()
    r = validate_datum(d)
    assert r.ok and not r.warnings


def test_ray_valuation_cone_is_rejected():
    r = validate_datum(make_datum(2, cone_from_generators(2, [(1, 0)])))
    assert not r.ok and "valuation cone not full-dimensional" in r.errors


def test_non_cosimplicial_cone_only_warns():
    V = cone_from_inequalities(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)])
    r = validate_datum(make_datum(3, V))
    assert r.ok and r.warnings


def test_rho_must_be_integral():
    with pytest.raises(InvalidDatum):
        make_datum(1, None, [("D1", ["1/2"])])


def test_duplicate_names_are_errors():
    assert not validate_datum(make_datum(1, None, [("D", (1,)), ("D", (2,))])).ok


def test_is_valuation():
    d = exa2_datum()
    assert is_valuation(d, (0, -1)) and not is_valuation(d, (0, 1)) and is_valuation(d, (0, 0))


def test_adding_colors_keeps_cone_verdicts():
    V = cone_from_generators(2, [(1, 0)])
    for colors in ([], [("D1", (1, 1))], [("D1", (1, 1)), ("D2", (0, -3))]):
        r = validate_datum(make_datum(2, V, colors))
        assert r.errors == ["valuation cone not full-dimensional"]


# -- colored cones ------------------------------------------------------------------

def test_toric_cones_are_colored():
    d = make_datum(2)
    assert is_colored_cone(d, cone_from_generators(2, [(1, 3), (-2, 1)]), [])


def test_colored_cone_needs_its_color():
    d = exa2_datum()
    s1 = cone_from_generators(2, [(1, 2), (-1, -1)])
    assert is_colored_cone(d, s1, ["D1"])
    r = is_colored_cone(d, s1, [])
    assert not r and "not generated" in r.errors[0]


def test_pointedness():
    d = make_datum(2, None, [("Z", (0, 0))])
    assert is_pointed_colored_cone(d, cc(d, []))
    half = cc(d, [(1, 0), (-1, 0), (0, 1)])
    assert not is_pointed_colored_cone(d, half)
    assert not is_pointed_colored_cone(d, cc(d, [(1, 0), (0, 1)], ["Z"]))


def test_colored_faces():
    d = exa2_datum()
    assert colored_faces(d, cc(d, [])) == [cc(d, [])]
    s1 = cc(d, [(1, 2), (-1, -1)], ["D1"])
    assert set(colored_faces(d, s1)) == {s1, cc(d, [(-1, -1)]), cc(d, [])}
    t = make_datum(2)
    assert len(colored_faces(t, cc(t, [(1, 0), (0, 1)]))) == 4


# -- fans and A2 ---------------------------------------------------------------------

def test_single_zero_cone_is_a_fan():
    d = exa2_datum()
    assert validate_colored_fan(d, [cc(d, [])])
    assert has_a2_property(ColoredFan(d, (cc(d, []),))).a2


def test_overlapping_fan_is_valid_but_not_a2():
    d = exa2_datum()
    cones = exa2_fan_cones(d)
    assert validate_colored_fan(d, cones)
    res = has_a2_property(ColoredFan(d, tuple(cones)))
    assert not res.a2
    s1, s2, v = res.witness
    assert relint_contains(s1.cone, v) and relint_contains(s2.cone, v)
    assert v[1] > 2 * abs(v[0])


def test_overlap_inside_valuation_cone_is_invalid():
    d = exa2_datum(full_space(2))
    r = validate_colored_fan(d, exa2_fan_cones(d))
    assert not r.ok
    assert any("meet inside" in e for e in r.errors)


def test_missing_face_is_reported():
    d = make_datum(2)
    r = validate_colored_fan(d, [cc(d, []), cc(d, [(1, 0), (0, 1)])])
    assert not r.ok and "missing" in r.errors[0]


def test_empty_fan_rejected():
    assert not validate_colored_fan(make_datum(1), [])
    with pytest.raises(SphfanError):
        make_fan(make_datum(1), [])


def test_a2_is_order_independent():
    d = exa2_datum()
    cones = exa2_fan_cones(d)
    for seed in range(5):
        random.Random(seed).shuffle(cones)
        assert not has_a2_property(ColoredFan(d, tuple(cones))).a2


def test_common_faces_imply_a2_on_toric_fans():
    fan = p2_fan()
    assert intersect_in_common_faces([s.cone for s in fan.cones])
    assert has_a2_property(fan).a2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any), min_size=1, max_size=4),
       st.data())
def test_a2_matches_common_faces_on_toric_collections(vectors, data):
    d = make_datum(2)
    cones = {cone_from_generators(2, [])}
    for v in vectors:
        w = data.draw(st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
        cones.add(cone_from_generators(2, [v, w]))
    members = [c for c in cones if c.is_pointed]
    closed = {f for c in members for f in faces(c)}
    fan = ColoredFan(d, tuple(cc(d, c.generators) for c in closed))
    assert has_a2_property(fan).a2 == intersect_in_common_faces(list(closed))


# -- global sections ------------------------------------------------------------------

def test_complete_fan_unchanged():
    fan = p2_fan()
    assert complete_for_global_sections(fan) == fan


def test_completion_in_two_color_datum():
    d = exa2_datum()
    fan = ColoredFan(d, (cc(d, []),))
    done = complete_for_global_sections(fan)
    assert set(fan.cones) <= set(done.cones)
    assert satisfies_global_sections_criterion(done)
    assert validate_colored_fan(d, done.cones)
    added = {s.cone.rays[0] for s in done.cones if s.cone.rank == 1}
    assert added <= {(1, 0), (-1, 0), (0, -1)}


def test_completion_in_rank_one():
    d = excol_datum()
    done = complete_for_global_sections(ColoredFan(d, (cc(d, []),)))
    assert set(done.cones) == {cc(d, []), cc(d, [(-1,)])}


def test_completion_needs_pointed_fan():
    d = make_datum(1)
    with pytest.raises(PreconditionError):
        complete_for_global_sections(ColoredFan(d, (cc(d, [(1,), (-1,)]),)))


def test_spanning_checks():
    assert spans_by_rank_and_lp(2, [(1, 0), (0, 1), (-1, -1)])
    assert spans_by_dual_cone(2, [(1, 0), (0, 1), (-1, -1)])
    assert not spans_by_rank_and_lp(2, [(1, 0), (0, 1), (-1, 0)])
    assert not spans_by_dual_cone(2, [(1, 0), (0, 1), (-1, 0)])
    assert spanning_vectors(p2_fan())


@settings(max_examples=30, deadline=None)
@given(unimodular(2))
def test_unimodular_equivariance_of_a2(m):
    V = cone_from_inequalities(2, [(0, -1)])
    d = exa2_datum()
    # rho and the generators of V move by m
    rays = [apply(m, g) for g in V.generators]
    td = make_datum(2, cone_from_generators(2, rays), [(c.name, apply(m, c.rho)) for c in d.colors])
    cones = [cc(td, [apply(m, g) for g in s.cone.generators], s.colors) for s in exa2_fan_cones(d)]
    assert validate_colored_fan(td, cones)
    res = has_a2_property(ColoredFan(td, tuple(cones)))
    assert not res.a2


def test_toric_fan_builder_sanity():
    fan = toric_fan([(1, 0), (0, 1)], [(0, 1)])
    assert validate_colored_fan(fan.datum, fan.cones)
    assert zero_cone(2) in {s.cone for s in fan.cones}
