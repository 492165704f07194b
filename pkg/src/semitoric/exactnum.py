"""Exact arithmetic: rationals, Gaussian numbers over Q or Q(sqrt d), and
integer matrices with Smith normal form.

Rationals are plain :class:`fractions.Fraction`. Real field elements
``a + b*sqrt(d)`` are :class:`QuadReal`; complex elements are
:class:`ExactComplex`. At most one square-free ``d > 1`` may be mixed into a
single computation; the default field is Q(i).
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "DimensionMismatch",
    "ExactComplex",
    "FieldMismatch",
    "I",
    "IntMatrix",
    "NotUnimodular",
    "QuadReal",
    "complex_rank",
    "configured_extension",
    "format_rational",
    "invariant_factors",
    "invert_unimodular",
    "parse_rational",
    "primitive",
    "rank_over_q",
    "real_rank",
    "set_extension",
    "smith_normal_form",
    "solve_linear",
    "solve_rational",
]


class DimensionMismatch(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


class FieldMismatch(ValueError):
    """Two different quadratic extensions met in one operation."""


# ---------------------------------------------------------------------------
# rationals

def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` (or a bare integer) into a reduced Fraction."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    if "/" in s:
        p, q = s.split("/", 1)
        try:
            p, q = int(p), int(q)
        except ValueError:
            raise ValueError(f"not a rational: {text!r}") from None
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(p, q)
    try:
        return Fraction(int(s))
    except ValueError:
        raise ValueError(f"not a rational: {text!r}") from None


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# quadratic extension configuration

def _squarefree(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _env_extension():
    raw = os.environ.get("SEMITORIC_SQRT")
    if not raw:
        return None
    d = int(raw)
    if not _squarefree(d):
        raise ValueError(f"SEMITORIC_SQRT={raw} is not a square-free integer > 1")
    return d


_EXTENSION = _env_extension()


def set_extension(d: int | None) -> None:
    """Select the real-quadratic extension used when parsing ``[a, b]`` pairs."""
    global _EXTENSION
    if d is not None and not _squarefree(d):
        raise ValueError(f"{d} is not a square-free integer > 1")
    _EXTENSION = d


def configured_extension() -> int | None:
    return _EXTENSION


# ---------------------------------------------------------------------------
# real field elements a + b*sqrt(d)

class QuadReal:
    """Element ``a + b*sqrt(d)`` of Q(sqrt d); ``d is None`` means plain Q."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int | None = None):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            d = None
        elif d is None:
            raise FieldMismatch("irrational part given without an extension")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadReal is immutable")

    @staticmethod
    def coerce(x) -> QuadReal:
        if isinstance(x, QuadReal):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadReal(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QuadReal")

    @staticmethod
    def sqrt(d: int) -> QuadReal:
        if not _squarefree(d):
            raise ValueError(f"{d} is not a square-free integer > 1")
        return QuadReal(0, 1, d)

    def _common(self, other: QuadReal):
        if self.d is None:
            return other.d
        if other.d is None or other.d == self.d:
            return self.d
        raise FieldMismatch(f"sqrt({self.d}) and sqrt({other.d}) in one expression")

    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other):
        try:
            other = QuadReal.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadReal(self.a + other.a, self.b + other.b, self._common(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadReal(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            other = QuadReal.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = QuadReal.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common(other)
        dd = d if d is not None else 0
        return QuadReal(
            self.a * other.a + self.b * other.b * dd,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm a^2 - d b^2 (nonzero for nonzero elements)."""
        return self.a * self.a - self.b * self.b * (self.d or 0)

    def inverse(self) -> QuadReal:
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadReal(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        try:
            other = QuadReal.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadReal.coerce(other) * self.inverse()

    def sign(self) -> int:
        """Exact sign, by comparing a^2 against d b^2 when signs disagree."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger square wins
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if lhs == rhs:  # impossible for square-free d, kept for safety
            return 0
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        try:
            other = QuadReal.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        if self.b == 0:
            return f"QuadReal({self.a})"
        return f"QuadReal({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.d})"

    def to_json(self):
        if self.b == 0:
            return format_rational(self.a)
        return [format_rational(self.a), format_rational(self.b)]

    @staticmethod
    def from_json(obj, d: int | None = None) -> QuadReal:
        if isinstance(obj, list):
            if len(obj) != 2:
                raise ValueError(f"expected [a, b] for a + b*sqrt(d), got {obj!r}")
            d = d if d is not None else configured_extension()
            b = parse_rational(obj[1])
            if b != 0 and d is None:
                raise FieldMismatch("irrational part given but no extension configured")
            return QuadReal(parse_rational(obj[0]), b, d)
        return QuadReal(parse_rational(obj))


# ---------------------------------------------------------------------------
# complex field elements

class ExactComplex:
    """Complex number ``re + i*im`` with exact real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", QuadReal.coerce(re))
        object.__setattr__(self, "im", QuadReal.coerce(im))
        self.re._common(self.im)

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    @staticmethod
    def coerce(x) -> ExactComplex:
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (int, Fraction, QuadReal)):
            return ExactComplex(x, 0)
        raise TypeError(f"cannot coerce {type(x).__name__} to ExactComplex")

    @property
    def d(self):
        return self.re.d or self.im.d

    def __add__(self, other):
        try:
            other = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        try:
            other = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> ExactComplex:
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> QuadReal:
        """Squared modulus, an exact real field element."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> ExactComplex:
        m = self.abs2()
        if not m:
            raise ZeroDivisionError("inverse of zero")
        inv = m.inverse()
        return ExactComplex(self.re * inv, -self.im * inv)

    def __truediv__(self, other):
        try:
            other = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = ExactComplex(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def is_rational(self) -> bool:
        return not self.im and self.re.is_rational()

    def __repr__(self):
        return f"ExactComplex({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"({self.im})*i"
        return f"({self.re})+({self.im})*i"

    def to_json(self):
        return [self.re.to_json(), self.im.to_json()]

    @staticmethod
    def from_json(obj, d: int | None = None) -> ExactComplex:
        if not isinstance(obj, list) or len(obj) != 2:
            raise ValueError(f"expected [re, im], got {obj!r}")
        return ExactComplex(QuadReal.from_json(obj[0], d), QuadReal.from_json(obj[1], d))


I = ExactComplex(0, 1)


# ---------------------------------------------------------------------------
# ranks

def _field_rank(rows: list[list], zero_test) -> int:
    """Row rank by Gaussian elimination over any exact field."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if not zero_test(rows[r][col])), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and not zero_test(rows[r][col]):
                f = rows[r][col] / p
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def rank_over_q(rows: Sequence[Sequence]) -> int:
    return _field_rank([[Fraction(x) for x in r] for r in rows], lambda x: x == 0)


def _check_lengths(vectors):
    vectors = [[ExactComplex.coerce(x) for x in v] for v in vectors]
    if vectors:
        n = len(vectors[0])
        bad = [i for i, v in enumerate(vectors) if len(v) != n]
        if bad:
            raise DimensionMismatch(f"vector {bad[0]} has length {len(vectors[bad[0]])}, expected {n}")
    return vectors


def real_rank(vectors: Iterable[Sequence]) -> int:
    """Rank over R of complex n-vectors viewed as real 2n-vectors.

    The entries live in Q(sqrt d) which sits inside R, so elimination over that
    field gives the real rank exactly.
    """
    vectors = _check_lengths(vectors)
    rows = [[z.re for z in v] + [z.im for z in v] for v in vectors]
    return _field_rank(rows, lambda x: not x)


def complex_rank(vectors: Iterable[Sequence]) -> int:
    """Rank over C of complex n-vectors."""
    vectors = _check_lengths(vectors)
    return _field_rank(vectors, lambda x: not x)


# ---------------------------------------------------------------------------
# integer matrices

class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols, nrows: int) -> IntMatrix:
        cols = [tuple(c) for c in cols]
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self.rows), self.nrows) if self.nrows else IntMatrix([], 0)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            cols = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows],
                other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise DimensionMismatch(f"{self.shape} @ vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self.rows)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if not self.is_square():
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return 1
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.is_square() and abs(self.det()) == 1

    def rank(self) -> int:
        return rank_over_q(self.rows)


def _row_ops_identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: IntMatrix):
    """Return ``(U, S, V)`` with ``U @ A @ V == S`` in Smith normal form.

    ``U`` and ``V`` are unimodular; the diagonal of ``S`` is nonnegative and
    satisfies the divisibility chain ``s1 | s2 | ...``.
    """
    m, n = A.shape
    S = [list(r) for r in A.rows]
    U = _row_ops_identity(m)
    V = _row_ops_identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in S:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // S[t][t]))
                    if S[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // S[t][t]))
                    if S[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # enforce divisibility against the rest of the block
                for i in range(t + 1, m):
                    bad = next((j for j in range(t + 1, n) if S[i][j] % S[t][t]), None)
                    if bad is not None:
                        add_row(t, i, 1)
                        done = False
                        break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return IntMatrix(U, m), IntMatrix(S, n), IntMatrix(V, n)


def invariant_factors(A: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, S, _ = smith_normal_form(A)
    return [S[i, i] for i in range(min(S.shape)) if S[i, i]]


def invert_unimodular(A: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a matrix with determinant +-1."""
    if not A.is_square():
        raise NotUnimodular(f"non-square matrix of shape {A.shape}")
    det = A.det()
    if abs(det) != 1:
        raise NotUnimodular(f"determinant {det}")
    n = A.nrows
    # Gauss-Jordan over Q; the result is integral because det = +-1
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(A.rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [[x.numerator for x in r[n:]] for r in aug]
    assert all(x.denominator == 1 for r in aug for x in r[n:])
    return IntMatrix(inv, n)


def solve_rational(A: IntMatrix, b: Sequence) -> list[Fraction] | None:
    """Solve ``A x = b`` for square nonsingular ``A`` over Q, else None."""
    n = A.nrows
    aug = [[Fraction(x) for x in r] + [Fraction(bi)] for r, bi in zip(A.rows, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [r[n] for r in aug]


def solve_linear(A: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One rational solution of ``A x = b`` for any shape of ``A``, or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    aug = [[Fraction(x) for x in r] + [Fraction(bi)] for r, bi in zip(A, b)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        p = aug[row][col]
        aug[row] = [x / p for x in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    if any(aug[r][n] != 0 for r in range(row, m)):
        return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return x


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(vec)
    return tuple(x // g for x in vec)
