import random
from fractions import Fraction

import pytest

from oracles import poly_eval_substitute
from semitoric.exactnum import ExactComplex, IntMatrix, invert_unimodular
from semitoric.chartcalc import (
    INFINITY,
    ChartVectorField,
    LaurentPoly,
    LogOneForm,
    MonomialMap,
    NonUnimodularMap,
    NotLogarithmic,
    d_closed,
    from_log_frame,
    pushforward,
    residue,
    to_log_frame,
    vanishing_order,
)

SEED = 20260101


def rand_coef(rng):
    return ExactComplex(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randint(-2, 2))


def rand_poly(rng, n, low=-2, high=2, terms=3, nonneg=()):
    out = LaurentPoly.zero(n)
    for _ in range(rng.randint(0, terms)):
        e = [rng.randint(0 if i in nonneg else low, high) for i in range(n)]
        out = out + LaurentPoly.monomial(e, rand_coef(rng))
    return out


def rand_unimodular(rng, n):
    M = IntMatrix.identity(n)
    for _ in range(5):
        E = [[int(r == c) for c in range(n)] for r in range(n)]
        if n > 1:
            i, j = rng.sample(range(n), 2)
            E[i][j] = rng.randint(-2, 2)
        if rng.random() < 0.3:
            k = rng.randrange(n)
            E[k][k] = -1
        M = M @ IntMatrix(E)
    return M


def rand_log_field(rng):
    n = rng.randint(1, 3)
    div = sorted(rng.sample(range(n), rng.randint(0, n)))
    # holomorphic along the boundary, arbitrary Laurent in the torus directions
    coeffs = [rand_poly(rng, n, nonneg=div) for _ in range(n)]
    return ChartVectorField("log", coeffs, div)


def test_laurent_arithmetic():
    z1 = LaurentPoly.variable(2, 0)
    z2 = LaurentPoly.variable(2, 1)
    p = (z1 + z2) ** 2
    assert p == z1 * z1 + z1 * z2 * 2 + z2 * z2
    assert (z1 ** -1) * z1 == LaurentPoly.constant(2, 1)
    assert p.derivative(0) == z1 * 2 + z2 * 2
    assert LaurentPoly.zero(2).min_exponent(0) == INFINITY


def test_laurent_json_sorted_roundtrip():
    p = LaurentPoly(2, {(1, 0): 3, (-1, 2): Fraction(1, 2), (0, 0): 0})
    obj = p.to_json()
    assert [e for e, _ in obj] == sorted(e for e, _ in obj)
    assert len(obj) == 2
    assert LaurentPoly.from_json(2, obj) == p


def test_substitution_matches_direct_oracle():
    rng = random.Random(SEED)
    for _ in range(100):
        n = rng.randint(1, 3)
        p = rand_poly(rng, n, terms=4)
        A = rand_unimodular(rng, n)
        got = p.substitute_monomial(A)
        want = poly_eval_substitute(dict(p.terms), A.tolist())
        assert dict(got.terms) == want


def test_non_unimodular_map_rejected():
    with pytest.raises(NonUnimodularMap):
        MonomialMap(IntMatrix([[2]]))


def test_inversion_chart_orders():
    # d/dz on the finite chart of P^1, seen from w = 1/z
    v = ChartVectorField("ordinary", [LaurentPoly.constant(1, 1)], [])
    w = pushforward(to_log_frame(v), MonomialMap(IntMatrix([[-1]])), [0])
    assert vanishing_order(w, 0, "ordinary") == 2
    assert vanishing_order(w, 0, "log") == 1
    assert from_log_frame(w).coefficients[0] == LaurentPoly.monomial([2], -1)


def test_not_logarithmic():
    v = ChartVectorField("ordinary", [LaurentPoly.constant(1, 1)], [0])
    assert not v.is_logarithmic()
    with pytest.raises(NotLogarithmic):
        to_log_frame(v)


def test_log_order_needs_divisor():
    v = ChartVectorField("log", [LaurentPoly.constant(1, 1)], [])
    with pytest.raises(ValueError):
        vanishing_order(v, 0, "log")
    assert vanishing_order(v, 0, "ordinary") == 1


def test_zero_field_order_infinite():
    v = ChartVectorField("log", [LaurentPoly.zero(1)], [0])
    assert vanishing_order(v, 0, "log") == INFINITY


def test_frame_roundtrip_200():
    rng = random.Random(SEED)
    for _ in range(200):
        w = rand_log_field(rng)
        v = from_log_frame(w)
        assert v.is_logarithmic()
        assert to_log_frame(v) == w
        assert from_log_frame(to_log_frame(v)) == v


def test_pushforward_functoriality_200():
    rng = random.Random(SEED + 1)
    for _ in range(200):
        v = rand_log_field(rng)
        A, B = MonomialMap(rand_unimodular(rng, v.n)), MonomialMap(rand_unimodular(rng, v.n))
        twice = pushforward(pushforward(v, B), A)
        once = pushforward(v, B.compose(A))
        assert twice == once


def test_pushforward_identity_and_inverse():
    rng = random.Random(SEED + 2)
    for _ in range(50):
        v = rand_log_field(rng)
        A = rand_unimodular(rng, v.n)
        assert pushforward(v, MonomialMap(IntMatrix.identity(v.n))) == v
        back = pushforward(pushforward(v, MonomialMap(A)), MonomialMap(invert_unimodular(A)))
        assert back == v


def test_pushforward_of_constant_field_is_linear():
    # constant log fields (torus generators) transform by A^-1
    A = IntMatrix([[1, 1], [0, 1]])
    v = ChartVectorField("log", [LaurentPoly.constant(2, 1), LaurentPoly.constant(2, 0)], [0, 1])
    w = pushforward(v, MonomialMap(A))
    assert [c for c in w.coefficients] == [LaurentPoly.constant(2, 1), LaurentPoly.zero(2)]


def test_field_json_roundtrip():
    rng = random.Random(3)
    v = rand_log_field(rng)
    assert ChartVectorField.from_json(v.to_json()) == v


def random_closed_form(rng):
    """c_i dz_i/z_i plus an exact differential dF, F holomorphic along D."""
    n = rng.randint(1, 3)
    div = sorted(rng.sample(range(n), rng.randint(1, n)))
    F = rand_poly(rng, n, nonneg=div, terms=4)
    log_parts, reg_parts = [], []
    for i in range(n):
        dF = F.derivative(i)
        if i in div:
            c = LaurentPoly.constant(n, rand_coef(rng))
            log_parts.append(c + dF.shift([int(j == i) for j in range(n)]))
            reg_parts.append(LaurentPoly.zero(n))
        else:
            log_parts.append(LaurentPoly.zero(n))
            reg_parts.append(dF)
    return LogOneForm(log_parts, reg_parts, div)


def test_closed_forms_have_constant_residues_100():
    rng = random.Random(SEED + 3)
    for _ in range(100):
        omega = random_closed_form(rng)
        assert d_closed(omega).closed
        for i in omega.divisor_indices:
            assert residue(omega, i).is_constant()


def test_non_closed_form_obstruction():
    z2 = LaurentPoly.variable(2, 1)
    omega = LogOneForm([z2, LaurentPoly.zero(2)], [LaurentPoly.zero(2)] * 2, [0, 1])
    rep = d_closed(omega)
    assert not rep.closed
    (i, j, basis, coeff), = rep.obstruction
    assert (i, j, basis) == (0, 1, "dz1/z1^dz2/z2")
    # d(z2 dz1/z1) = dz2 ^ dz1/z1 = -z2 dz1/z1 ^ dz2/z2
    assert coeff == z2 * -1
    assert not residue(omega, 0).is_constant()


def test_log_form_rejects_log_part_off_divisor():
    with pytest.raises(ValueError):
        LogOneForm([LaurentPoly.constant(1, 1)], [LaurentPoly.zero(1)], [])


def test_form_json_roundtrip():
    omega = random_closed_form(random.Random(9))
    assert LogOneForm.from_json(omega.to_json()) == omega
