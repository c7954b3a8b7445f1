"""Acceptance criteria, one test each; ``conftest`` prints a PASS/FAIL line per criterion."""

import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from builders import FIXED_CONFIGURATIONS, FIXTURES, excol, p2, p2_fan
from sphfan.ambient import build_ambient, equivalence_report
from sphfan.cli import run
from sphfan.colored import (
    ColoredFan,
    colored_faces,
    complete_for_global_sections,
    has_a2_property,
    spanning_vectors,
    spans_by_dual_cone,
    spans_by_rank_and_lp,
    validate_colored_fan,
)
from sphfan.cone import cone_from_generators, full_space, relint_common_point, relint_contains, zero_cone
from sphfan.enumeration import (
    decide_a2,
    enumerate_true_maximal_phi_bunches,
    enumerate_true_maximal_psi_fans,
    random_configuration,
    verify_duality_theorem,
)
from sphfan.gale import PsiCone, is_true_maximal_psi_fan, psi_fan_to_colored_fan, supported_pointed_psi_cones
from sphfan.io import load_problem

FIXTURE_NAMES = ["ex-col", "p2", "p1xp1", "hirzebruch-0", "hirzebruch-1", "hirzebruch-2", "ex-a2"]
RANDOM_SEEDS = range(100)


def fixture(name):
    return str(FIXTURES / f"{name}.json")


@pytest.fixture(scope="module")
def duality_runs():
    """Reports of the exhaustive duality check, shared with the psi-fan criterion."""
    start = time.perf_counter()
    runs = [(name, verify_duality_theorem(FIXED_CONFIGURATIONS[name]())) for name in FIXTURE_NAMES]
    for seed in RANDOM_SEEDS:
        conf = random_configuration(seed, max_rank=3, max_colors=2, max_rays=4, entry=3)
        runs.append((seed, conf, verify_duality_theorem(conf)))
    return runs, time.perf_counter() - start


@pytest.mark.criterion(1, "A2 decision on the overlapping two-color fan")
def test_criterion_1_a2_decision():
    status, _ = run(["validate-fan", fixture("ex-a2")])
    assert status == 0
    status, text = run(["check-a2", fixture("ex-a2")])
    assert status == 1
    wit = json.loads(text)["witness"]
    v = tuple(Fraction(x) for x in wit["v"])
    prob = load_problem(fixture("ex-a2"))
    cones = [cone_from_generators(2, [[Fraction(x) for x in g] for g in c["rays"]]) for c in wit["cones"]]
    assert {c for c in cones} == {s.cone for s in prob.fan if s.colors}
    # hand-solved facet systems: 2x - y > 0, -x - y > 0 and -2x - y > 0, x - y > 0 up to sign
    normals = [n for c in cones for n in c.facet_normals]
    assert len(normals) == 4
    assert all(sum(a * b for a, b in zip(n, v)) > 0 for n in normals)
    assert all(relint_contains(c, v) for c in cones)


@pytest.mark.criterion(2, "exhaustive duality on fixtures and 100 random configurations")
def test_criterion_2_duality(duality_runs):
    runs, elapsed = duality_runs
    failures = [(r[0], r[-1].counterexample) for r in runs if not r[-1].ok]
    assert not failures, failures
    assert len(runs) == len(FIXTURE_NAMES) + len(RANDOM_SEEDS)
    for conf in (random_configuration(s) for s in RANDOM_SEEDS):
        assert conf.datum.rank <= 3 and conf.r <= 2 and conf.n <= 4
        assert all(abs(x) <= 3 for u in conf.rays for x in u)
    assert elapsed < 60, elapsed
    # the CLI drives the same checks
    for name in FIXTURE_NAMES:
        status, text = run(["verify-duality", fixture(name)])
        assert status == 0 and json.loads(text)["ok"]


@pytest.mark.criterion(3, "uniqueness counts for the two-color line and the projective plane")
def test_criterion_3_uniqueness():
    c = excol()
    fans = enumerate_true_maximal_psi_fans(c)
    assert len(fans) == 1
    assert set(fans[0]) == {PsiCone(zero_cone(1), frozenset()),
                            PsiCone(cone_from_generators(1, [(-1,)]), frozenset())}
    bunches = enumerate_true_maximal_phi_bunches(c)
    assert len(bunches) == 1
    assert [t.cone for t in bunches[0]] == [cone_from_generators(2, [(1, 0), (0, 1)])]
    t = p2()
    assert len(enumerate_true_maximal_psi_fans(t)) == 1
    assert len(enumerate_true_maximal_phi_bunches(t)) == 1


# grid values with denominator at most 4 in [-4, 4], scaled by 12 to integers
GRID = sorted({x for x in range(-48, 49) if x % 3 == 0 or x % 4 == 0})


def _grid_common_point(a, b):
    dim = a.dim
    eqs = list(a.span_equations) + list(b.span_equations)
    strict = list(a.facet_normals) + list(b.facet_normals)
    points = [()]
    for t in range(dim):
        points = [p + (x,) for p in points for x in GRID]
        if t == dim - 1:
            break
    for row in eqs:
        points = [p for p in points if sum(r * x for r, x in zip(row, p)) == 0]
    for row in strict:
        points = [p for p in points if sum(r * x for r, x in zip(row, p)) > 0]
    return points[0] if points else None


def _random_pair(rng):
    dim = rng.randint(1, 3)

    def gens():
        return [tuple(rng.randint(-4, 4) for _ in range(dim)) for _ in range(rng.randint(0, 4))]
    return cone_from_generators(dim, gens()), cone_from_generators(dim, gens())


@pytest.mark.criterion(4, "LP relative-interior verdicts against a rational grid search")
def test_criterion_4_lp_soundness():
    rng = random.Random(20261015)
    disagreements = []
    for k in range(500):
        a, b = _random_pair(rng)
        lp = relint_common_point(a, b)
        if lp is not None and not (relint_contains(a, lp) and relint_contains(b, lp)):
            disagreements.append((k, "bad witness", a, b, lp))
        g = _grid_common_point(a, b)
        if g is not None:
            assert relint_contains(a, g) and relint_contains(b, g)
            if lp is None:
                disagreements.append((k, "grid positive, LP negative", a, b, g))
    assert not disagreements, disagreements[:3]


@pytest.mark.criterion(5, "every enumerated psi-fan is a colored fan with the A2-property")
def test_criterion_5_psi_fans_are_a2(duality_runs):
    runs, _ = duality_runs
    checked = 0
    for entry in runs:
        conf = FIXED_CONFIGURATIONS[entry[0]]() if len(entry) == 2 else entry[1]
        for f in entry[-1].fans:
            cf = psi_fan_to_colored_fan(conf, f)
            assert validate_colored_fan(conf.datum, cf.cones), (entry[0], f)
            assert has_a2_property(cf).a2, (entry[0], f)
            checked += 1
    assert checked >= len(runs)


@pytest.mark.criterion(6, "ambient membership equivalence with multiplicity two")
def test_criterion_6_ambient_equivalence():
    disagreements = []
    checked = 0
    for name in FIXTURE_NAMES:
        c = FIXED_CONFIGURATIONS[name]()
        amb = build_ambient(c)
        assert amb.multiplicities == (2,) * c.r
        sp = supported_pointed_psi_cones(c)
        for theta in enumerate_true_maximal_phi_bunches(c):
            for s, mask, eq in equivalence_report(amb, theta, sp):
                checked += 1
                if not eq.agree:
                    disagreements.append((name, s, mask))
    assert checked and not disagreements, disagreements[:3]


def _random_pointed_fan(seed):
    """A face-closed subfan of an enumerated psi-fan, seen as a colored fan."""
    conf = random_configuration(seed, max_rank=3, max_colors=2, max_rays=3)
    fans = enumerate_true_maximal_psi_fans(conf)
    if not fans:
        return None
    rng = random.Random(seed)
    full = psi_fan_to_colored_fan(conf, rng.choice(fans))
    keep = [s for s in full.cones if rng.random() < 0.5] or [full.cones[0]]
    fan = ColoredFan(conf.datum, tuple({f for s in keep for f in colored_faces(conf.datum, s)}))
    if not fan.is_pointed or not validate_colored_fan(fan.datum, fan.cones):
        return None
    return fan


@pytest.mark.criterion(7, "A2 pipeline certificate and global-sections completion")
def test_criterion_7_pipeline():
    fan = p2_fan()
    cert = decide_a2(fan.datum, fan)
    assert cert.a2 and is_true_maximal_psi_fan(cert.configuration, cert.extension)

    fans, seed, grown = 0, 0, 0
    while fans < 100:
        seed += 1
        fan = _random_pointed_fan(seed)
        if fan is None:
            continue
        fans += 1
        done = complete_for_global_sections(fan)
        assert set(fan.cones) <= set(done.cones)
        assert validate_colored_fan(done.datum, done.cones)
        vecs = spanning_vectors(done)
        assert spans_by_rank_and_lp(done.datum.rank, vecs), seed
        assert spans_by_dual_cone(done.datum.rank, vecs), seed
        grown += len(done) > len(fan)
    # the sample must exercise the completion step itself
    assert grown > 0


DETERMINISM_COMMANDS = ["validate-datum", "validate-fan", "check-a2", "fan-to-bunch", "bunch-to-fan",
                        "enumerate-fans", "enumerate-bunches", "verify-duality", "complete-fan",
                        "ambient-check"]


@pytest.mark.criterion(8, "byte-identical CLI output across runs and thread counts")
def test_criterion_8_determinism():
    for name, command in itertools.product(["ex-col", "ex-a2", "p2", "hirzebruch-1"], DETERMINISM_COMMANDS):
        first = run([command, fixture(name)])
        assert first == run([command, fixture(name)]), (name, command)
    for name in ["p1xp1", "hirzebruch-2", "ex-a2"]:
        for command in ["enumerate-fans", "enumerate-bunches", "verify-duality"]:
            outs = {run([command, fixture(name), "--threads", str(w)]) for w in (1, 2, 4)}
            assert len(outs) == 1, (name, command)
    outs = {run(["verify-duality", "--random", "10", "--seed", "3", "--threads", str(w)]) for w in (1, 4)}
    assert len(outs) == 1


def test_grid_search_oracle_sanity():
    # the oracle itself: a known overlap and a known separation
    q = cone_from_generators(2, [(1, 0), (0, 1)])
    assert _grid_common_point(q, cone_from_generators(2, [(1, 1)])) is not None
    assert _grid_common_point(q, cone_from_generators(2, [(-1, 0), (0, -1)])) is None
    assert _grid_common_point(full_space(2), zero_cone(2)) == (0, 0)
