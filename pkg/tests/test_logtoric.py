import itertools

import pytest

from corpus import NONPROJECTIVE_3, SINGULAR, corner_cut, smooth_complete_corpus, toric_suite
from oracles import betti_oracle, matmul
from semitoric.exactnum import IntMatrix
from semitoric.fan import PreconditionFailed, affine_space, cones_of_dim, hirzebruch, projective_space
from semitoric.logtoric import (
    NonSmoothCone,
    NotSnc,
    TrivialityCertificate,
    adjacent_pairs,
    betti_numbers,
    chart,
    charts,
    d_invariant,
    detectors,
    fundamental_field,
    isotropy,
    log_transition,
    residue_matrix,
    snc_certificate,
    strata_census,
    triviality_certificate,
    verify_snc,
    verify_triviality,
)

CORPUS = smooth_complete_corpus()


def test_p2_frame_certificate():
    f = projective_space(2)
    cert = triviality_certificate(f)
    assert cert.trivial
    assert len(cert.chart_matrices) == 3
    assert verify_triviality(f, cert)
    assert cert.to_json()["charts"][1] == {"cone": [0, 2], "matrix": [[1, -1], [0, -1]]}


def test_certificate_json_roundtrip():
    f = hirzebruch(2)
    cert = triviality_certificate(f)
    again = TrivialityCertificate.from_json(cert.to_json())
    assert again.to_json() == cert.to_json()
    assert verify_triviality(f, again)


@pytest.mark.parametrize("name", sorted(SINGULAR))
def test_singular_fans_are_nontrivial(name):
    f = SINGULAR[name]
    cert = triviality_certificate(f)
    assert cert.verdict == "nontrivial"
    assert any(s != 1 for s in cert.failure_invariant_factors)
    assert verify_triviality(f, cert)
    with pytest.raises(NotSnc):
        snc_certificate(f)


def test_failure_site_for_cone_with_index_two():
    cert = triviality_certificate(SINGULAR["cone_1_1_1_m1"])
    assert cert.failure_site == (0, 1)
    assert cert.failure_invariant_factors == [1, 2]


def test_tampered_chart_matrix_rejected():
    f = projective_space(2)
    cert = triviality_certificate(f)
    cone, C = cert.chart_matrices[1]
    rows = C.tolist()
    rows[0][0] += 1
    cert.chart_matrices[1] = (cone, IntMatrix(rows))
    assert not verify_triviality(f, cert)


def test_flipped_verdict_rejected():
    f = projective_space(2)
    obj = triviality_certificate(f).to_json()
    obj["verdict"] = "nontrivial"
    assert not verify_triviality(f, TrivialityCertificate.from_json(obj))


def test_chart_of_non_smooth_cone_raises():
    with pytest.raises(NonSmoothCone):
        chart(SINGULAR["weighted_112"], (0, 2))


def test_partial_chart_completion():
    # a ray chart in rank 3 completes to a unimodular basis
    f = projective_space(3)
    for k in range(4):
        for c in cones_of_dim(f, k):
            ch = chart(f, c)
            assert ch.ray_matrix.is_unimodular()
            assert ch.ray_matrix.columns()[:k] == [f.rays[i] for i in c]
            assert ch.local_equation() == ("*".join(f"z{i + 1}" for i in range(k)) or "1")


def test_fundamental_fields_are_constant_in_log_frame():
    f = projective_space(2)
    ch = chart(f, (1, 2))
    # R^-1 e_1 for rays (0,1), (-1,-1)
    assert fundamental_field(ch, (1, 0)) == (-1, -1)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_cocycle_and_frame_coherence(name):
    f = CORPUS[name]
    cert = triviality_certificate(f)
    C = {c: m for c, m in cert.chart_matrices}
    for a, b in adjacent_pairs(f):
        T = log_transition(f, a, b)
        assert T.is_unimodular()
        assert T @ C[b] == C[a]
    cones = sorted(f.max_cones)
    for a, b, c in itertools.islice(itertools.permutations(cones, 3), 200):
        assert log_transition(f, a, c) == log_transition(f, a, b) @ log_transition(f, b, c)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_residues_dual_basis_identity(name):
    f = CORPUS[name]
    for ch in charts(f):
        k = len(ch.cone)
        dual = ch.dual_basis.tolist()[:k]
        assert residue_matrix(ch, dual) == IntMatrix.identity(k)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_betti_matches_poincare_oracle(name):
    f = CORPUS[name]
    b = betti_numbers(f)
    assert b == betti_oracle(f.n, f.max_cones)
    assert b[1] == 0
    assert d_invariant(f) == f.n
    assert sum(b) == len(f.max_cones)


def test_betti_requires_complete():
    with pytest.raises(PreconditionFailed):
        betti_numbers(affine_space(2))


def test_strata_census_p2():
    c = strata_census(projective_space(2))
    assert c.counts == {0: 1, 1: 3, 2: 3}
    assert c.closed_stratum_dim == 2


def test_isotropy_saturation():
    f = SINGULAR["cone_1_1_1_m1"]
    rep = isotropy(f, (0, 1))
    assert rep.rank == 2 and rep.saturation_index == 2 and not rep.is_semi_torus
    assert isotropy(f, (0,)).is_semi_torus
    assert isotropy(f, ()).is_semi_torus


def test_isotropy_basis_spans_saturation():
    f = SINGULAR["weighted_1112"]
    rep = isotropy(f, (0, 1, 3))
    assert rep.saturation_index == 2
    B = [list(b) for b in rep.basis]
    assert IntMatrix([list(r) for r in zip(*B)]).is_unimodular()


@pytest.mark.parametrize("name", sorted(toric_suite()))
def test_toric_suite_all_semi_tori(name):
    f = toric_suite()[name]
    for k in range(f.n + 1):
        for c in cones_of_dim(f, k):
            assert isotropy(f, c).is_semi_torus


def test_snc_certificate_verifies():
    f = NONPROJECTIVE_3
    cert = snc_certificate(f)
    assert verify_snc(f, cert)
    assert all(eq == "z1*z2*z3" for _, _, eq in cert.charts)
    assert not verify_snc(projective_space(3), cert)


@pytest.mark.parametrize("f", list(corner_cut().values()) + list(SINGULAR.values()))
def test_detectors_agree(f):
    d = detectors(f)
    assert len(set(d.values())) == 1


def test_transition_inverse_pairs():
    f = hirzebruch(3)
    for a, b in adjacent_pairs(f):
        assert matmul(log_transition(f, a, b).tolist(), log_transition(f, b, a).tolist()) == [[1, 0], [0, 1]]
