import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import invariant_factors_oracle, matmul
from semitoric.exactnum import (
    I,
    DimensionMismatch,
    ExactComplex,
    FieldMismatch,
    IntMatrix,
    NotUnimodular,
    QuadReal,
    complex_rank,
    format_rational,
    invariant_factors,
    invert_unimodular,
    parse_rational,
    real_rank,
    set_extension,
    smith_normal_form,
    solve_linear,
)

rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x.numerator) < 10 ** 6)


@pytest.fixture
def sqrt2():
    set_extension(2)
    yield QuadReal.sqrt(2)
    set_extension(None)


def test_rational_roundtrip():
    assert parse_rational("6/4") == Fraction(3, 2)
    assert format_rational(Fraction(-3, 2)) == "-3/2"
    assert parse_rational("7") == 7
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("x/2")


@given(rationals)
def test_rational_format_parse_inverse(x):
    assert parse_rational(format_rational(x)) == x


def test_quadreal_sign_exact(sqrt2):
    r = sqrt2
    assert (r - Fraction(141421, 100000)).sign() == 1
    assert (r - Fraction(141422, 100000)).sign() == -1
    assert r * r == 2
    assert (1 + r) * (r - 1) == 1


def test_mixed_extensions_rejected():
    with pytest.raises(FieldMismatch):
        QuadReal.sqrt(2) + QuadReal.sqrt(3)


def test_extension_must_be_squarefree():
    with pytest.raises(ValueError):
        set_extension(8)


@given(rationals, rationals, rationals, rationals)
def test_quadreal_field_identities(a, b, c, d):
    x, y = QuadReal(a, b, 5 if b else None), QuadReal(c, d, 5 if d else None)
    assert x + y == y + x
    assert x * y == y * x
    if x:
        assert x * x.inverse() == 1
    assert (x - y) + y == x


@given(rationals, rationals, rationals, rationals)
def test_complex_field_identities(a, b, c, d):
    z, w = ExactComplex(a, b), ExactComplex(c, d)
    assert z * w == w * z
    assert (z * w).abs2() == z.abs2() * w.abs2()
    if w:
        assert (z / w) * w == z
    assert z.conjugate().conjugate() == z


def test_complex_basics():
    assert I * I == -1
    assert ExactComplex(3, 4).abs2() == 25
    assert (I ** -1) == -I


def test_json_roundtrip_exact(sqrt2):
    z = ExactComplex(QuadReal(Fraction(1, 3), Fraction(-2, 7), 2), Fraction(5, 9))
    obj = z.to_json()
    assert obj == [["1/3", "-2/7"], "5/9"]
    assert ExactComplex.from_json(obj) == z


def test_irrational_json_requires_extension():
    with pytest.raises(FieldMismatch):
        ExactComplex.from_json([["0/1", "1/1"], "0/1"])


def test_real_and_complex_rank(sqrt2):
    # 1 and i are R-independent but C-dependent
    assert real_rank([[1], [I]]) == 2
    assert complex_rank([[1], [I]]) == 1
    # 1 and sqrt 2 are Q-independent but R-dependent
    assert real_rank([[1], [sqrt2]]) == 1
    assert real_rank([[1, 0], [0, 1], [I, 0], [0, I]]) == 4


def test_rank_length_mismatch():
    with pytest.raises(DimensionMismatch):
        real_rank([[1, 2], [1]])


def test_determinant():
    assert IntMatrix([[2, 0], [0, 3]]).det() == 6
    assert IntMatrix([[1, 1], [1, -1]]).det() == -2
    assert IntMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]]).det() == 1


@pytest.mark.parametrize("rows, diag", [
    ([[1, 1], [1, -1]], [1, 2]),
    ([[2, 0], [0, 3]], [1, 6]),
    ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
    ([[0, 0], [0, 0]], [0, 0]),
])
def test_snf_examples(rows, diag):
    A = IntMatrix(rows)
    U, S, V = smith_normal_form(A)
    assert U @ A @ V == S
    assert [S[i, i] for i in range(len(diag))] == diag


def _random_matrix(rng):
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    return [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]


def test_snf_property_1000_random():
    rng = random.Random(20260101)
    for _ in range(1000):
        rows = _random_matrix(rng)
        A = IntMatrix(rows)
        U, S, V = smith_normal_form(A)
        assert U.is_unimodular() and V.is_unimodular()
        assert U @ A @ V == S
        m, n = S.shape
        diag = [S[i, i] for i in range(min(m, n))]
        assert all(S[i, j] == 0 for i in range(m) for j in range(n) if i != j)
        nz = [d for d in diag if d]
        assert all(d > 0 for d in nz)
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
        assert diag[len(nz):] == [0] * (len(diag) - len(nz))
        assert nz == invariant_factors_oracle(rows)


def test_invariant_factors_match_minors():
    rows = [[4, 6], [6, 9], [2, 3]]
    assert invariant_factors(IntMatrix(rows)) == invariant_factors_oracle(rows)


def test_unimodular_inverse():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 4)
        M = IntMatrix.identity(n)
        for _ in range(6):
            i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
            E = [[int(r == c) for c in range(n)] for r in range(n)]
            if i != j:
                E[i][j] = rng.randint(-3, 3)
            else:
                E[i][i] = -1
            M = M @ IntMatrix(E)
        Minv = invert_unimodular(M)
        assert M @ Minv == IntMatrix.identity(n)
        assert matmul(Minv.tolist(), M.tolist()) == IntMatrix.identity(n).tolist()


def test_non_unimodular_inverse_rejected():
    with pytest.raises(NotUnimodular):
        invert_unimodular(IntMatrix([[1, 1], [1, -1]]))


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_solve_linear_consistent_systems(A, x):
    b = [sum(a * xi for a, xi in zip(row, x)) for row in A]
    y = solve_linear(A, b)
    assert y is not None
    assert [sum(a * yi for a, yi in zip(row, y)) for row in A] == b


def test_solve_linear_inconsistent():
    assert solve_linear([[1, 1], [2, 2]], [1, 3]) is None
