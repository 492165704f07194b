from fractions import Fraction

import pytest

from corpus import NONPROJECTIVE_3, SINGULAR, toric_suite
from semitoric.fan import (
    Fan,
    FanError,
    NotPure,
    PreconditionFailed,
    ProjectivityCertificate,
    affine_space,
    cones_of_dim,
    corner_cut_fans,
    hirzebruch,
    is_complete,
    is_projective,
    is_smooth,
    point_fan,
    product_p1,
    projective_space,
    projectivity_system,
    star_subdivide,
    validate_fan,
    verify_projectivity,
    walls,
)
from semitoric.fan import _row
from semitoric.lp import fourier_motzkin


def test_p2_basic():
    f = projective_space(2)
    assert validate_fan(f).valid
    assert is_smooth(f)
    assert is_complete(f).complete
    assert len(walls(f)) == 3


def test_canonical_serialization_sorts_indices():
    f = Fan(2, [(1, 0), (0, 1)], [(1, 0)])
    assert f.max_cones == ((0, 1),)
    assert Fan.from_json(f.to_json()) == f
    assert '"max_cones": [[0, 1]]' in f.dumps()


@pytest.mark.parametrize("obj, msg", [
    ({"n": 2, "rays": [[1, 0]], "max_cones": [[0, 3]]}, "out of range"),
    ({"n": 2, "rays": [[1, 0, 0]], "max_cones": []}, "length"),
    ({"n": 2, "rays": [[1, 0]]}, "missing"),
    ({"n": 2, "rays": [[1, 0], [0, 1]], "max_cones": [[0, 0]]}, "repeated"),
])
def test_schema_errors(obj, msg):
    with pytest.raises(FanError, match=msg):
        Fan.from_json(obj)


@pytest.mark.parametrize("rays, cones, kind", [
    ([(2, 0), (0, 1)], [(0, 1)], "non_primitive"),
    ([(1, 0), (0, 0)], [(0,)], "zero_ray"),
    ([(1, 0), (1, 0)], [(0,), (1,)], "duplicate_ray"),
    ([(1, 0), (-1, 0)], [(0, 1)], "not_strongly_convex"),
    ([(1, 0), (0, 1), (1, 1)], [(0, 1), (1, 2)], "bad_intersection"),
    ([(1, 0), (0, 1)], [(0, 1), (0,)], "not_maximal"),
    ([(1, 0), (0, 1)], [(0, 1), (0, 1)], "duplicate_cone"),
])
def test_validation_violations(rays, cones, kind):
    rep = validate_fan(Fan(2, rays, cones))
    assert not rep.valid
    assert kind in rep.kinds()


def test_non_simplicial_detected():
    f = Fan(3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [(0, 1, 2, 3)])
    assert "non_simplicial" in validate_fan(f).kinds()


def test_smoothness_reports_failure_site():
    rep = is_smooth(SINGULAR["cone_1_1_1_m1"])
    assert not rep
    assert rep.failures == [((0, 1), [1, 2])]


def test_incomplete_fans():
    rep = is_complete(affine_space(2))
    assert not rep.complete
    assert rep.unpaired_walls
    # removing a cone from P^2 leaves unpaired walls and uncovered points
    f = projective_space(2)
    g = Fan(2, f.rays, f.max_cones[:2])
    rep = is_complete(g)
    assert not rep.complete and rep.uncovered_points


def test_completeness_is_seed_independent_for_complete_fans():
    f = hirzebruch(2)
    assert all(is_complete(f, seed=s).complete for s in (1, 2, 3))


def test_walls_requires_pure():
    f = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (2,)])
    with pytest.raises(NotPure):
        walls(f)


def test_face_enumeration_p2():
    f = projective_space(2)
    assert [len(cones_of_dim(f, k)) for k in range(3)] == [1, 3, 3]


def test_point_fan():
    f = point_fan()
    assert validate_fan(f).valid and is_smooth(f) and is_complete(f).complete


def test_star_subdivision_is_blow_up():
    f = star_subdivide(projective_space(2), 0)
    assert len(f.rays) == 4 and len(f.max_cones) == 4
    assert validate_fan(f).valid and is_smooth(f) and is_complete(f).complete


def test_corner_cut_corpus():
    fans = corner_cut_fans(20)
    assert len(fans) == 20
    assert [len(f.rays) for f in fans] == list(range(4, 24))
    for f in fans:
        assert validate_fan(f).valid and is_smooth(f) and is_complete(f).complete
    assert corner_cut_fans(20) == fans


@pytest.mark.parametrize("name", sorted(toric_suite()))
def test_toric_suite_projective(name):
    f = toric_suite()[name]
    cert = is_projective(f)
    assert cert.feasible
    assert verify_projectivity(f, cert)


def test_projectivity_certificate_roundtrip():
    f = hirzebruch(1)
    cert = is_projective(f)
    again = ProjectivityCertificate.from_json(cert.to_json())
    assert again.to_json() == cert.to_json()
    assert verify_projectivity(f, again)


def test_projectivity_preconditions():
    with pytest.raises(PreconditionFailed):
        is_projective(SINGULAR["cone_1_1_1_m1"])
    with pytest.raises(PreconditionFailed):
        is_projective(affine_space(2))


def _fm(f):
    eqs, gaps = projectivity_system(f)
    return fourier_motzkin([_row(f, *g) for g in gaps], [1] * len(gaps),
                           [_row(f, *e) for e in eqs], [0] * len(eqs))


def test_nonprojective_fan_infeasible_and_fm_agrees():
    f = NONPROJECTIVE_3
    assert validate_fan(f).valid and is_smooth(f) and is_complete(f).complete
    cert = is_projective(f)
    assert cert.verdict == "infeasible"
    assert verify_projectivity(f, cert)
    oracle = _fm(f)
    assert not oracle.feasible
    # the oracle's own witness passes the same solver-free check
    eqs, gaps = projectivity_system(f)
    y = oracle.multipliers
    z, w = y[: len(gaps)], y[len(gaps):]
    witness = ProjectivityCertificate("infeasible", equality_multipliers=w, gap_multipliers=z,
                                      equalities=eqs, gaps=gaps)
    assert verify_projectivity(f, witness)


@pytest.mark.parametrize("f", [projective_space(2), hirzebruch(1), product_p1(3)])
def test_fm_feasible_point_is_support_function(f):
    oracle = _fm(f)
    assert oracle.feasible
    m = oracle.point
    forms = [m[k * f.n:(k + 1) * f.n] for k in range(len(f.max_cones))]
    eqs, gaps = projectivity_system(f)
    cert = ProjectivityCertificate("feasible", forms=forms, equalities=eqs, gaps=gaps)
    assert verify_projectivity(f, cert)


def test_tampered_projectivity_rejected():
    f = hirzebruch(1)
    cert = is_projective(f)
    cert.forms[0][0] += Fraction(1, 7)
    assert not verify_projectivity(f, cert)
    cert = is_projective(NONPROJECTIVE_3)
    cert.gap_multipliers[0] += 1
    assert not verify_projectivity(NONPROJECTIVE_3, cert)

