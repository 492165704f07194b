"""Vector fields and logarithmic one-forms with Laurent polynomial
coefficients on one chart ``C^n`` whose boundary divisor is a union of
coordinate hyperplanes.

Variables are indexed from 0. A field in the ``"ordinary"`` frame stores the
coefficients of ``d/dz_i``; in the ``"log"`` frame, of ``z_i d/dz_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .exactnum import ExactComplex, IntMatrix, invert_unimodular

__all__ = [
    "ChartVectorField",
    "LaurentPoly",
    "LogOneForm",
    "MonomialMap",
    "NonUnimodularMap",
    "NotLogarithmic",
    "d_closed",
    "from_log_frame",
    "pushforward",
    "residue",
    "to_log_frame",
    "vanishing_order",
]

INFINITY = math.inf


class NotLogarithmic(ValueError):
    pass


class NonUnimodularMap(ValueError):
    pass


class LaurentPoly:
    """Sparse Laurent polynomial: exponent tuple -> nonzero ExactComplex."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, ExactComplex] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {n}")
            c = ExactComplex.coerce(c)
            acc[exp] = acc.get(exp, ExactComplex(0)) + c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", {e: c for e, c in sorted(acc.items()) if c})

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def zero(cls, n: int) -> LaurentPoly:
        return cls(n)

    @classmethod
    def constant(cls, n: int, c) -> LaurentPoly:
        return cls(n, {(0,) * n: c})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1) -> LaurentPoly:
        return cls(len(exp), {tuple(exp): c})

    @classmethod
    def variable(cls, n: int, i: int) -> LaurentPoly:
        return cls.monomial(tuple(int(j == i) for j in range(n)))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: LaurentPoly):
        if self.n != other.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.constant(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        return LaurentPoly(self.n, list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = []
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return LaurentPoly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self.terms.items()
            return LaurentPoly.monomial(tuple(x * k for x in e), c.inverse() ** (-k))
        out = LaurentPoly.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.n == other.n and self.terms == other.terms
        try:
            return self == LaurentPoly.constant(self.n, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def __repr__(self):
        return f"LaurentPoly({self.n}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(f"z{i + 1}^{k}" if k != 1 else f"z{i + 1}" for i, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def shift(self, exp: Sequence[int]) -> LaurentPoly:
        """Multiply by the monomial ``z^exp``."""
        return LaurentPoly(self.n, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()})

    def min_exponent(self, i: int) -> float:
        """Smallest exponent of ``z_i``; +inf for the zero polynomial."""
        return min((e[i] for e in self.terms), default=INFINITY)

    def derivative(self, i: int) -> LaurentPoly:
        out = []
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out.append((tuple(ne), c * e[i]))
        return LaurentPoly(self.n, out)

    def substitute_monomial(self, A: IntMatrix) -> LaurentPoly:
        """Rewrite through ``z_j = prod_k w_k^A[j][k]``: ``z^e -> w^(A^T e)``."""
        AT = A.T
        return LaurentPoly(A.ncols, [(AT @ e, c) for e, c in self.terms.items()])

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def to_json(self):
        return [[list(e), c.to_json()] for e, c in self.terms.items()]

    @classmethod
    def from_json(cls, n: int, obj) -> LaurentPoly:
        return cls(n, [(tuple(e), ExactComplex.from_json(c)) for e, c in obj])


def _poly(n, x) -> LaurentPoly:
    return x if isinstance(x, LaurentPoly) else LaurentPoly.constant(n, x)


@dataclass(frozen=True)
class MonomialMap:
    """Chart change ``w -> z`` with ``z_j = prod_k w_k^A[j][k]``."""

    A: IntMatrix

    def __post_init__(self):
        if not self.A.is_square() or abs(self.A.det()) != 1:
            raise NonUnimodularMap(f"exponent matrix {self.A.tolist()} is not unimodular")

    def compose(self, inner: MonomialMap) -> MonomialMap:
        """The map ``x -> z`` obtained by first applying ``inner: x -> w`` then self."""
        return MonomialMap(self.A @ inner.A)


@dataclass(frozen=True)
class ChartVectorField:
    frame: str
    coefficients: tuple
    divisor_indices: frozenset

    def __init__(self, frame: str, coefficients: Sequence, divisor_indices: Iterable[int] = ()):
        if frame not in ("ordinary", "log"):
            raise ValueError(f"unknown frame {frame!r}")
        coefficients = tuple(coefficients)
        n = next((c.n for c in coefficients if isinstance(c, LaurentPoly)), len(coefficients))
        coefficients = tuple(_poly(n, c) for c in coefficients)
        if any(c.n != len(coefficients) for c in coefficients):
            raise ValueError("coefficient polynomials must have one variable per coordinate")
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "divisor_indices", frozenset(divisor_indices))

    @property
    def n(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def is_logarithmic(self) -> bool:
        """Tangent to the boundary: the d/dz_i coefficient is divisible by z_i on D."""
        if self.frame == "log":
            return True
        return all(self.coefficients[i].min_exponent(i) >= 1 for i in self.divisor_indices)

    def to_json(self):
        return {
            "frame": self.frame,
            "n": self.n,
            "divisor_indices": sorted(self.divisor_indices),
            "coefficients": [c.to_json() for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, obj) -> ChartVectorField:
        n = obj["n"]
        return cls(obj["frame"], [LaurentPoly.from_json(n, c) for c in obj["coefficients"]],
                   obj.get("divisor_indices", []))


def to_log_frame(v: ChartVectorField) -> ChartVectorField:
    """Divide the ``d/dz_i`` coefficients by ``z_i`` (all i), giving the
    coefficients of ``z_i d/dz_i``; along D this needs divisibility."""
    if v.frame == "log":
        return v
    if not v.is_logarithmic():
        bad = next(i for i in sorted(v.divisor_indices) if v.coefficients[i].min_exponent(i) < 1)
        raise NotLogarithmic(f"coefficient of d/dz{bad + 1} is not divisible by z{bad + 1}")
    n = v.n
    coeffs = [c.shift([-int(j == i) for j in range(n)]) for i, c in enumerate(v.coefficients)]
    return ChartVectorField("log", coeffs, v.divisor_indices)


def from_log_frame(v: ChartVectorField) -> ChartVectorField:
    if v.frame == "ordinary":
        return v
    n = v.n
    coeffs = [c.shift([int(j == i) for j in range(n)]) for i, c in enumerate(v.coefficients)]
    return ChartVectorField("ordinary", coeffs, v.divisor_indices)


def pushforward(v: ChartVectorField, phi: MonomialMap, divisor_indices: Iterable[int] | None = None) -> ChartVectorField:
    """Rewrite a log-frame field in the coordinates ``w`` of ``phi: w -> z``.

    Since ``log z = A log w`` the new coefficients are ``A^-1 c(phi(w))``.
    ``divisor_indices`` names the boundary in the new chart (default: same).
    """
    if v.frame != "log":
        raise ValueError("pushforward expects a field in the log frame")
    A = phi.A
    if A.nrows != v.n:
        raise ValueError(f"map of size {A.nrows} applied to a field on C^{v.n}")
    Ainv = invert_unimodular(A)
    subs = [c.substitute_monomial(A) for c in v.coefficients]
    n = A.ncols
    coeffs = []
    for row in Ainv.rows:
        acc = LaurentPoly.zero(n)
        for a, c in zip(row, subs):
            if a:
                acc = acc + c * a
        coeffs.append(acc)
    div = v.divisor_indices if divisor_indices is None else divisor_indices
    return ChartVectorField("log", coeffs, div)


def vanishing_order(v: ChartVectorField, i: int, frame: str | None = None) -> float:
    """Order of vanishing along ``z_i = 0`` in the requested frame.

    The minimum over all coefficients of the lowest ``z_i`` exponent; the zero
    field has order +inf. Log orders are only defined along the boundary.
    """
    frame = frame or v.frame
    if frame == "log" and i not in v.divisor_indices:
        raise ValueError(f"index {i} is not a boundary coordinate")
    if frame == "log":
        w = to_log_frame(v)
    elif frame == "ordinary":
        w = from_log_frame(v)
    else:
        raise ValueError(f"unknown frame {frame!r}")
    return min((c.min_exponent(i) for c in w.coefficients), default=INFINITY)


# ---------------------------------------------------------------------------
# logarithmic one-forms

@dataclass(frozen=True)
class LogOneForm:
    """``sum_i f_i dz_i/z_i + sum_i g_i dz_i`` with f_i = 0 off the divisor.

    Every coefficient must be holomorphic along each boundary coordinate, so
    the only poles are the first-order ones carried by ``dz_i/z_i``.
    """

    log_parts: tuple
    regular_parts: tuple
    divisor_indices: frozenset

    def __init__(self, log_parts: Sequence, regular_parts: Sequence, divisor_indices: Iterable[int]):
        n = len(log_parts)
        if len(regular_parts) != n:
            raise ValueError("log and regular parts must have the same length")
        lp = tuple(_poly(n, x) for x in log_parts)
        rp = tuple(_poly(n, x) for x in regular_parts)
        div = frozenset(divisor_indices)
        for i, f in enumerate(lp):
            if f and i not in div:
                raise ValueError(f"log part along z{i + 1} but z{i + 1} is not a boundary coordinate")
        for j in div:
            for k, p in enumerate(lp + rp):
                if p.min_exponent(j) < 0:
                    raise ValueError(f"coefficient {k} has a pole along z{j + 1} = 0")
        object.__setattr__(self, "log_parts", lp)
        object.__setattr__(self, "regular_parts", rp)
        object.__setattr__(self, "divisor_indices", div)

    @property
    def n(self) -> int:
        return len(self.log_parts)

    def ordinary_coefficients(self) -> list[LaurentPoly]:
        """Coefficients h_i of dz_i: h_i = f_i / z_i + g_i."""
        n = self.n
        return [f.shift([-int(j == i) for j in range(n)]) + g
                for i, (f, g) in enumerate(zip(self.log_parts, self.regular_parts))]

    def to_json(self):
        return {
            "n": self.n,
            "divisor_indices": sorted(self.divisor_indices),
            "log_parts": [p.to_json() for p in self.log_parts],
            "regular_parts": [p.to_json() for p in self.regular_parts],
        }

    @classmethod
    def from_json(cls, obj) -> LogOneForm:
        n = obj["n"]
        return cls([LaurentPoly.from_json(n, p) for p in obj["log_parts"]],
                   [LaurentPoly.from_json(n, p) for p in obj["regular_parts"]],
                   obj.get("divisor_indices", []))


@dataclass
class ClosednessReport:
    closed: bool
    # (i, j, basis label, coefficient) for every nonzero component of d(omega)
    obstruction: list

    def __bool__(self):
        return self.closed

    def to_json(self):
        return {
            "closed": self.closed,
            "obstruction": [{"pair": [i, j], "basis": basis, "coefficient": c.to_json()}
                            for i, j, basis, c in self.obstruction],
        }


def _basis_label(i: int, j: int, div) -> str:
    a = f"dz{i + 1}/z{i + 1}" if i in div else f"dz{i + 1}"
    b = f"dz{j + 1}/z{j + 1}" if j in div else f"dz{j + 1}"
    return f"{a}^{b}"


def d_closed(omega: LogOneForm) -> ClosednessReport:
    """Exterior derivative of a log form, reported in the adapted 2-form basis.

    The coefficient of ``dz_i ^ dz_j`` (i < j) is ``d_i h_j - d_j h_i``; it is
    then rescaled by ``z_i`` and/or ``z_j`` for boundary coordinates so that
    it multiplies ``dz_i/z_i ^ dz_j`` and friends.
    """
    n = omega.n
    h = omega.ordinary_coefficients()
    div = omega.divisor_indices
    obstruction = []
    for i in range(n):
        for j in range(i + 1, n):
            c = h[j].derivative(i) - h[i].derivative(j)
            if c:
                shift = [int(k == i and i in div) + int(k == j and j in div) for k in range(n)]
                obstruction.append((i, j, _basis_label(i, j, div), c.shift(shift)))
    return ClosednessReport(not obstruction, obstruction)


def residue(omega: LogOneForm, i: int) -> LaurentPoly:
    """Residue along ``z_i = 0`` in units of 2*pi*i, as a polynomial in the
    remaining n - 1 variables."""
    if i not in omega.divisor_indices:
        raise ValueError(f"z{i + 1} is not a boundary coordinate")
    f = omega.log_parts[i]
    terms = [(e[:i] + e[i + 1:], c) for e, c in f.terms.items() if e[i] == 0]
    return LaurentPoly(omega.n - 1, terms)
