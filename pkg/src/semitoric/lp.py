"""Exact rational linear programming.

Two independent routes are provided:

* :func:`simplex` -- a dense two-phase tableau simplex with Bland's rule over
  :class:`~fractions.Fraction`.
* :func:`fourier_motzkin` -- feasibility of ``A x >= b`` by variable
  elimination, tracking the multipliers of every derived row so that an
  infeasible system comes back with its own Farkas combination.

Neither route calls the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

__all__ = [
    "LPResult",
    "FMResult",
    "simplex",
    "solve_general",
    "fourier_motzkin",
]


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] = field(default_factory=list)
    value: Fraction | None = None


def _pivot(T, basis, r, c):
    p = T[r][c]
    T[r] = [x / p for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    basis[r] = c


def _run(T, basis, ncols, allowed):
    """Minimize the objective held in the last row of tableau ``T``.

    The last row stores reduced costs; entering columns are restricted to
    ``allowed``. Returns False when unbounded.
    """
    obj = T[-1]
    while True:
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(len(T) - 1):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], enter)
        obj = T[-1]


def simplex(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0`` exactly."""
    m = len(A)
    n = len(c)
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-v for v in A[i]]
            b[i] = -b[i]
    # phase I: artificial variable per row
    total = n + m
    T = [A[i] + [Fraction(int(j == i)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # reduced costs of sum(artificials)
    obj = [Fraction(0)] * (total + 1)
    for i in range(m):
        for j in range(n):
            obj[j] -= T[i][j]
        obj[-1] -= T[i][-1]
    T.append(obj)
    _run(T, basis, total, [True] * n + [False] * m)
    if T[-1][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    # phase II
    obj = [Fraction(v) for v in c] + [Fraction(0)]
    for i, bv in enumerate(basis):
        cb = obj[bv]
        if cb != 0:
            obj = [a - cb * t for a, t in zip(obj, T[i])]
    T.append(obj)
    if not _run(T, basis, n, [True] * n):
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", x, value)


def solve_general(c, A_eq=(), b_eq=(), A_ge=(), b_ge=(), nonneg=None, maximize=False) -> LPResult:
    """Optimize ``c.x`` with equality rows, ``>=`` rows and optional free variables.

    ``nonneg[j]`` says whether variable ``j`` is sign-constrained; free
    variables are split into positive and negative parts internally.
    """
    n = len(c)
    if nonneg is None:
        nonneg = [True] * n
    cols = []  # (original var, sign)
    for j in range(n):
        cols.append((j, 1))
        if not nonneg[j]:
            cols.append((j, -1))
    nsurplus = len(A_ge)
    rows, rhs = [], []
    for row, bi in zip(A_eq, b_eq):
        rows.append([Fraction(row[j]) * s for j, s in cols] + [Fraction(0)] * nsurplus)
        rhs.append(Fraction(bi))
    for k, (row, bi) in enumerate(zip(A_ge, b_ge)):
        sur = [Fraction(0)] * nsurplus
        sur[k] = Fraction(-1)
        rows.append([Fraction(row[j]) * s for j, s in cols] + sur)
        rhs.append(Fraction(bi))
    sgn = -1 if maximize else 1
    cost = [sgn * Fraction(c[j]) * s for j, s in cols] + [Fraction(0)] * nsurplus
    res = simplex(cost, rows, rhs)
    if res.status != "optimal":
        return LPResult(res.status)
    x = [Fraction(0)] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * res.x[k]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", x, value)


# ---------------------------------------------------------------------------
# Fourier-Motzkin

@dataclass
class FMResult:
    feasible: bool
    point: list[Fraction] | None = None
    # nonnegative multipliers on the input rows yielding 0 >= positive
    multipliers: list[Fraction] | None = None


def _normalize(coeffs, rhs, mult):
    # scale so the first nonzero coefficient has |value| 1; keeps rows canonical
    lead = next((a for a in coeffs if a != 0), None)
    if lead is None:
        return coeffs, rhs, mult
    s = abs(lead)
    return [a / s for a in coeffs], rhs / s, [m / s for m in mult]


def fourier_motzkin(A: Sequence[Sequence], b: Sequence, equalities: Sequence[Sequence] = (),
                    eq_rhs: Sequence = ()) -> FMResult:
    """Decide feasibility of ``A x >= b`` together with ``E x = f``.

    Equalities are eliminated first by exact substitution; the remaining
    inequalities are projected one variable at a time. Every derived row keeps
    its combination of input rows, so an infeasible system returns
    multipliers ``y`` (nonnegative on inequality rows, sign-free on equality
    rows, in that order) with ``y [A; E] = 0`` and ``y [b; f] > 0``.
    """
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    E = [[Fraction(v) for v in row] for row in equalities]
    f = [Fraction(v) for v in eq_rhs]
    nvars = len(A[0]) if A else (len(E[0]) if E else 0)
    nin = len(A) + len(E)

    def unit(k):
        m = [Fraction(0)] * nin
        m[k] = Fraction(1)
        return m

    ineqs = [(row, r, unit(k)) for k, (row, r) in enumerate(zip(A, b))]
    eqs = [(row, r, unit(len(A) + k)) for k, (row, r) in enumerate(zip(E, f))]

    # Gaussian substitution of the equalities
    pivots = []  # (variable, row, rhs) in elimination order
    while eqs:
        row, r, m = eqs.pop()
        j = next((k for k, a in enumerate(row) if a != 0), None)
        if j is None:
            if r != 0:
                sign = 1 if r > 0 else -1
                return FMResult(False, multipliers=[sign * x for x in m])
            continue
        row, r, m = [a / row[j] for a in row], r / row[j], [x / row[j] for x in m]
        pivots.append((j, row, r))

        def eliminate(item):
            c, rr, mm = item
            a = c[j]
            if a == 0:
                return item
            return ([x - a * y for x, y in zip(c, row)], rr - a * r, [x - a * y for x, y in zip(mm, m)])

        eqs = [eliminate(e) for e in eqs]
        ineqs = [eliminate(e) for e in ineqs]

    rows = [_normalize(*item) for item in ineqs]
    for coeffs, rhs, mult in rows:
        if all(a == 0 for a in coeffs) and rhs > 0:
            return FMResult(False, multipliers=mult)
    pivot_vars = {j for j, _, _ in pivots}
    stages = []
    for j in reversed(range(nvars)):
        if j in pivot_vars:
            continue
        stages.append((j, rows))
        pos = [r for r in rows if r[0][j] > 0]
        neg = [r for r in rows if r[0][j] < 0]
        new = [r for r in rows if r[0][j] == 0]
        for pc, pr, pm in pos:
            for nc, nr, nm in neg:
                lp, ln = pc[j], -nc[j]
                new.append(_normalize([ln * a + lp * c for a, c in zip(pc, nc)],
                                      ln * pr + lp * nr,
                                      [ln * a + lp * c for a, c in zip(pm, nm)]))
        # keep only the tightest row per direction
        best = {}
        for coeffs, rhs, mult in new:
            key = tuple(coeffs)
            if key not in best or rhs > best[key][1]:
                best[key] = (coeffs, rhs, mult)
        rows = list(best.values())
        for coeffs, rhs, mult in rows:
            if all(a == 0 for a in coeffs) and rhs > 0:
                return FMResult(False, multipliers=mult)
    # feasible: back-substitute free variables, then the pivots
    x = [Fraction(0)] * nvars
    for j, rows_j in reversed(stages):
        lo, hi = None, None
        for coeffs, rhs, _ in rows_j:
            a = coeffs[j]
            if a == 0:
                continue
            rest = sum((coeffs[k] * x[k] for k in range(nvars) if k != j), Fraction(0))
            bound = (rhs - rest) / a
            if a > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            x[j] = (lo + hi) / 2
        elif lo is not None:
            x[j] = lo
        elif hi is not None:
            x[j] = hi
    for j, row, r in reversed(pivots):
        x[j] = r - sum((row[k] * x[k] for k in range(nvars) if k != j), Fraction(0))
    return FMResult(True, point=x)
