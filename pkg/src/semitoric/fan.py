"""Simplicial rational fans: validation, smoothness, completeness and
projectivity, plus constructors for the textbook examples.

A fan is stored as its lattice rank, a tuple of primitive ray generators and
a tuple of maximal cones, each a sorted tuple of ray indices.
"""

from __future__ import annotations

import functools
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import (
    IntMatrix,
    format_rational,
    parse_rational,
    rank_over_q,
    smith_normal_form,
    solve_linear,
    solve_rational,
)
from .lp import solve_general

__all__ = [
    "Fan",
    "FanError",
    "NotPure",
    "PreconditionFailed",
    "ProjectivityCertificate",
    "ValidationReport",
    "affine_space",
    "all_cones",
    "cone_invariant_factors",
    "cone_is_smooth",
    "cones_of_dim",
    "corner_cut_fans",
    "hirzebruch",
    "is_complete",
    "is_projective",
    "is_smooth",
    "point_fan",
    "product_p1",
    "projectivity_system",
    "projective_space",
    "standard_fan",
    "star_subdivide",
    "validate_fan",
    "verify_projectivity",
    "walls",
]

DEFAULT_SEED = 20260101
SCHEMA_VERSION = 1


class FanError(ValueError):
    pass


class NotPure(FanError):
    pass


class PreconditionFailed(FanError):
    pass


@dataclass(frozen=True)
class Fan:
    n: int
    rays: tuple
    max_cones: tuple

    def __init__(self, n: int, rays: Iterable[Sequence[int]], max_cones: Iterable[Iterable[int]]):
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in rays))
        object.__setattr__(self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in max_cones))

    def ray_matrix(self, cone: Sequence[int]) -> IntMatrix:
        """Matrix whose columns are the generators of ``cone``."""
        return IntMatrix.from_columns([self.rays[i] for i in cone], self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> Fan:
        """Build a fan from its JSON form; raises FanError on schema problems."""
        if not isinstance(obj, dict):
            raise FanError("fan must be a JSON object")
        for key in ("n", "rays", "max_cones"):
            if key not in obj:
                raise FanError(f"missing field {key!r}")
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise FanError(f"field 'n': expected a nonnegative integer, got {n!r}")
        rays = obj["rays"]
        if not isinstance(rays, list):
            raise FanError("field 'rays': expected a list")
        for k, r in enumerate(rays):
            if not isinstance(r, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
                raise FanError(f"rays[{k}]: expected a list of integers")
            if len(r) != n:
                raise FanError(f"rays[{k}]: length {len(r)} but n = {n}")
        cones = obj["max_cones"]
        if not isinstance(cones, list):
            raise FanError("field 'max_cones': expected a list")
        for k, c in enumerate(cones):
            if not isinstance(c, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
                raise FanError(f"max_cones[{k}]: expected a list of integers")
            for i in c:
                if not 0 <= i < len(rays):
                    raise FanError(f"max_cones[{k}]: ray index {i} out of range 0..{len(rays) - 1}")
            if len(set(c)) != len(c):
                raise FanError(f"max_cones[{k}]: repeated ray index")
        return cls(n, rays, cones)


# ---------------------------------------------------------------------------
# validation

@dataclass(frozen=True)
class Violation:
    kind: str
    location: str
    message: str

    def to_json(self):
        return {"kind": self.kind, "location": self.location, "message": self.message}


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_json(self):
        return {"valid": self.valid, "violations": [v.to_json() for v in self.violations]}


def _contains_line(gens: list[tuple]) -> bool:
    # a nonnegative combination with weights summing to 1 that hits the origin
    if not gens:
        return False
    n = len(gens[0])
    k = len(gens)
    A_eq = [[g[i] for g in gens] for i in range(n)] + [[1] * k]
    b_eq = [0] * n + [1]
    return solve_general([0] * k, A_eq, b_eq).status == "optimal"


def _dual_rows(f: Fan, cone: tuple, cache: dict) -> list:
    # rows of R^-1 for a full-dimensional simplicial cone
    if cone not in cache:
        n = f.n
        R = f.ray_matrix(cone)
        cache[cone] = [solve_rational(R.T, [int(k == j) for k in range(n)]) for j in range(n)]
    return cache[cone]


def _separable(f: Fan, s1: tuple, s2: tuple, cache: dict | None = None) -> bool:
    """True iff s1 and s2 meet exactly in the cone on their common rays.

    Looks for m vanishing on shared rays, >= 1 on rays only in s1 and <= -1
    on rays only in s2 (separation lemma for simplicial cones). Cheap exact
    candidates built from the dual bases are tried before the LP.
    """
    cache = {} if cache is None else cache
    common = set(s1) & set(s2)
    only1 = [f.rays[i] for i in s1 if i not in common]
    only2 = [f.rays[i] for i in s2 if i not in common]

    def pair(m, v):
        return sum(a * b for a, b in zip(m, v))

    def indicator(cone):
        # 1 on the cone's own extra rays, 0 on the common ones
        D = _dual_rows(f, cone, cache)
        return [sum(D[k][j] for k, i in enumerate(cone) if i not in common) for j in range(f.n)]

    cands = []
    if len(s1) == f.n:
        cands.append(indicator(s1))
    if len(s2) == f.n:
        cands.append([-x for x in indicator(s2)])
    if len(cands) == 2:
        cands.append([a + b for a, b in zip(cands[0], cands[1])])
    for m in cands:
        if all(pair(m, v) > 0 for v in only1) and all(pair(m, v) < 0 for v in only2):
            return True
    A_eq, b_eq, A_ge, b_ge = [], [], [], []
    for i in common:
        A_eq.append(list(f.rays[i]))
        b_eq.append(0)
    for i in s1:
        if i not in common:
            A_ge.append(list(f.rays[i]))
            b_ge.append(1)
    for i in s2:
        if i not in common:
            A_ge.append([-x for x in f.rays[i]])
            b_ge.append(1)
    res = solve_general([0] * f.n, A_eq, b_eq, A_ge, b_ge, nonneg=[False] * f.n)
    return res.status == "optimal"


def validate_fan(f: Fan) -> ValidationReport:
    """Check primitivity, distinctness, simpliciality, strong convexity and the
    pairwise intersection property. Problems are collected, not raised."""
    return ValidationReport(list(_violations(f)))


@functools.lru_cache(maxsize=256)
def _violations(f: Fan) -> tuple:
    # fans are immutable, so repeated validation of the same fan is free
    rep = ValidationReport()
    bad = rep.violations
    for k, r in enumerate(f.rays):
        if len(r) != f.n:
            bad.append(Violation("dimension", f"rays[{k}]", f"length {len(r)} but n = {f.n}"))
            continue
        if not any(r):
            bad.append(Violation("zero_ray", f"rays[{k}]", "ray generator is zero"))
            continue
        g = math.gcd(*r)
        if g != 1:
            bad.append(Violation("non_primitive", f"rays[{k}]", f"non-primitive ray {list(r)} (gcd {g})"))
    seen = {}
    for k, r in enumerate(f.rays):
        if r in seen:
            bad.append(Violation("duplicate_ray", f"rays[{k}]", f"same generator as rays[{seen[r]}]"))
        else:
            seen[r] = k
    if bad:
        return tuple(bad)

    simplicial = []
    for k, c in enumerate(f.max_cones):
        if any(not 0 <= i < len(f.rays) for i in c):
            bad.append(Violation("dangling_index", f"max_cones[{k}]", "ray index out of range"))
            continue
        gens = [f.rays[i] for i in c]
        if rank_over_q(gens) == len(gens):
            simplicial.append(k)
            continue
        if _contains_line(gens):
            bad.append(Violation("not_strongly_convex", f"max_cones[{k}]",
                                 f"cone on rays {list(c)} contains a line"))
        else:
            bad.append(Violation("non_simplicial", f"max_cones[{k}]",
                                 f"cone on rays {list(c)} has linearly dependent generators; "
                                 "only simplicial cones are supported"))
    cone_sets = [set(c) for c in f.max_cones]
    for a, b in itertools.combinations(range(len(f.max_cones)), 2):
        if cone_sets[a] == cone_sets[b]:
            bad.append(Violation("duplicate_cone", f"max_cones[{b}]", f"repeats max_cones[{a}]"))
        elif cone_sets[a] <= cone_sets[b] or cone_sets[b] <= cone_sets[a]:
            small, big = (a, b) if cone_sets[a] <= cone_sets[b] else (b, a)
            bad.append(Violation("not_maximal", f"max_cones[{small}]", f"is a face of max_cones[{big}]"))
    duals: dict = {}
    for a, b in itertools.combinations(simplicial, 2):
        if cone_sets[a] <= cone_sets[b] or cone_sets[b] <= cone_sets[a]:
            continue
        if not _separable(f, f.max_cones[a], f.max_cones[b], duals):
            bad.append(Violation("bad_intersection", f"max_cones[{a}],max_cones[{b}]",
                                 "intersection is not a common face"))
    return tuple(bad)


# ---------------------------------------------------------------------------
# faces, smoothness, completeness

def cones_of_dim(f: Fan, k: int) -> list[tuple]:
    """All distinct k-dimensional faces of the maximal cones, sorted."""
    out = set()
    for c in f.max_cones:
        if len(c) >= k:
            out.update(itertools.combinations(c, k))
    return sorted(out)


def all_cones(f: Fan) -> list[tuple]:
    dim = max((len(c) for c in f.max_cones), default=0)
    out = []
    for k in range(dim + 1):
        out.extend(cones_of_dim(f, k))
    return out


def cone_invariant_factors(f: Fan, cone: Sequence[int]) -> list[int]:
    if not cone:
        return []
    _, S, _ = smith_normal_form(f.ray_matrix(cone))
    return [S[i, i] for i in range(len(cone))]


def cone_is_smooth(f: Fan, cone: Sequence[int]) -> bool:
    return all(s == 1 for s in cone_invariant_factors(f, cone))


@dataclass
class SmoothnessReport:
    smooth: bool
    # failing cone -> its Smith invariant factors
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.smooth

    def to_json(self):
        return {
            "smooth": self.smooth,
            "failures": [{"cone": list(c), "invariant_factors": s} for c, s in self.failures],
        }


def is_smooth(f: Fan) -> SmoothnessReport:
    """Every maximal cone's generators extend to a lattice basis."""
    failures = []
    for c in sorted(f.max_cones):
        inv = cone_invariant_factors(f, c)
        if any(s != 1 for s in inv):
            failures.append((c, inv))
    return SmoothnessReport(not failures, failures)


def walls(f: Fan) -> list[tuple[tuple, tuple]]:
    """Codimension-one faces of the maximal cones with their incident cone indices."""
    if any(len(c) != f.n for c in f.max_cones):
        raise NotPure("walls are only defined for pure n-dimensional fans")
    if f.n == 0:
        return []
    inc: dict[tuple, list[int]] = {}
    for k, c in enumerate(f.max_cones):
        for w in itertools.combinations(c, f.n - 1):
            inc.setdefault(w, []).append(k)
    return [(w, tuple(inc[w])) for w in sorted(inc)]


def _in_cone(f: Fan, cone: tuple, point: Sequence[int]) -> bool:
    lam = solve_rational(f.ray_matrix(cone), point)
    return lam is not None and all(x >= 0 for x in lam)


@dataclass
class CompletenessReport:
    walls_paired: bool
    sampling_covered: bool
    unpaired_walls: list = field(default_factory=list)
    uncovered_points: list = field(default_factory=list)
    samples: int = 0
    seed: int = DEFAULT_SEED

    @property
    def complete(self) -> bool:
        return self.walls_paired and self.sampling_covered

    def __bool__(self):
        return self.complete

    def to_json(self):
        return {
            "complete": self.complete,
            "walls_paired": self.walls_paired,
            "unpaired_walls": [list(w) for w in self.unpaired_walls],
            "sampling_covered": self.sampling_covered,
            "uncovered_points": [list(p) for p in self.uncovered_points],
            "samples": self.samples,
            "seed": self.seed,
        }


def is_complete(f: Fan, seed: int = DEFAULT_SEED, samples: int = 64, box: int = 50) -> CompletenessReport:
    """Wall pairing plus exact point location on seeded random lattice points."""
    if any(len(c) != f.n for c in f.max_cones):
        raise NotPure("some maximal cone has dimension < n")
    unpaired = [w for w, inc in walls(f) if len(inc) != 2]
    rng = random.Random(seed)
    uncovered = []
    if f.n > 0:
        for _ in range(samples):
            p = [rng.randint(-box, box) for _ in range(f.n)]
            if not any(_in_cone(f, c, p) for c in f.max_cones):
                uncovered.append(p)
    elif not f.max_cones:
        uncovered.append([])
    return CompletenessReport(not unpaired, not uncovered, unpaired, uncovered, samples, seed)


# ---------------------------------------------------------------------------
# projectivity

@dataclass
class ProjectivityCertificate:
    """Either linear forms per maximal cone (feasible) or a Farkas witness.

    The LP rows are indexed as in :func:`projectivity_system`: ``equalities``
    and ``gaps`` are lists of ``(cone_a, cone_b, ray)`` meaning the
    functional ``<m_a - m_b, ray>``.
    """

    verdict: str
    forms: list | None = None
    equality_multipliers: list | None = None
    gap_multipliers: list | None = None
    equalities: list = field(default_factory=list)
    gaps: list = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.verdict == "feasible"

    def to_json(self):
        out = {
            "kind": "projectivity",
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict,
            "equalities": [[a, b, list(v)] for a, b, v in self.equalities],
            "gaps": [[a, b, list(v)] for a, b, v in self.gaps],
        }
        if self.forms is not None:
            out["forms"] = [[format_rational(x) for x in m] for m in self.forms]
        if self.equality_multipliers is not None:
            out["equality_multipliers"] = [format_rational(x) for x in self.equality_multipliers]
            out["gap_multipliers"] = [format_rational(x) for x in self.gap_multipliers]
        return out

    @classmethod
    def from_json(cls, obj) -> ProjectivityCertificate:
        def rows(key):
            return [(_strict_int(a), _strict_int(b), tuple(_strict_int(x) for x in v)) for a, b, v in obj[key]]

        if obj.get("kind") != "projectivity" or obj.get("schema_version") != SCHEMA_VERSION:
            raise FanError("not a projectivity certificate of this schema version")
        cert = cls(obj["verdict"], equalities=rows("equalities"), gaps=rows("gaps"))
        if "forms" in obj:
            cert.forms = [[parse_rational(x) for x in m] for m in obj["forms"]]
        if "equality_multipliers" in obj:
            cert.equality_multipliers = [parse_rational(x) for x in obj["equality_multipliers"]]
            cert.gap_multipliers = [parse_rational(x) for x in obj["gap_multipliers"]]
        return cert


def _strict_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FanError(f"expected an integer, got {x!r}")
    return x


def projectivity_system(f: Fan):
    """Wall equalities and strict gaps for a strictly convex support function.

    For each wall shared by cones a and b: ``<m_a - m_b, v> = 0`` for the
    wall rays and ``<m_a - m_b, v'> > 0`` for the ray ``v'`` of b off the wall.
    """
    equalities, gaps = [], []
    for w, inc in walls(f):
        if len(inc) != 2:
            continue
        a, b = inc
        for i in w:
            equalities.append((a, b, f.rays[i]))
        (other,) = set(f.max_cones[b]) - set(w)
        gaps.append((a, b, f.rays[other]))
    return equalities, gaps


def _row(f: Fan, a: int, b: int, v: Sequence[int]) -> list:
    row = [0] * (len(f.max_cones) * f.n)
    for i in range(f.n):
        row[a * f.n + i] += v[i]
        row[b * f.n + i] -= v[i]
    return row


def _wall_heights(f: Fan, gaps) -> list[list[Fraction]]:
    """Each gap as a linear form in the support function's values on the rays.

    For a gap ``(a, b, v')`` write ``v' = sum lam_i u_i`` over the rays of cone
    a; then ``<m_a - m_b, v'> = sum lam_i h(u_i) - h(v')``.
    """
    rows = []
    for a, b, v in gaps:
        cone = f.max_cones[a]
        lam = solve_rational(f.ray_matrix(cone), v)
        row = [Fraction(0)] * len(f.rays)
        for i, x in zip(cone, lam):
            row[i] += x
        row[f.rays.index(tuple(v))] -= 1
        rows.append(row)
    return rows


def is_projective(f: Fan, seed: int = DEFAULT_SEED) -> ProjectivityCertificate:
    """Decide whether a smooth complete fan carries a strictly convex support function.

    The LP runs over the values ``h`` of the support function on the rays
    (the wall equalities then hold by construction): maximize a common slack
    ``s <= 1`` below every gap. A positive optimum gives the forms ``m_sigma``
    by solving ``<m_sigma, u> = h(u)`` on each cone, rescaled so every gap is at
    least 1. Otherwise the Farkas alternative ``W^T z = 0, sum z = 1, z >= 0``
    is solved and lifted to multipliers on the per-cone system.
    """
    if not is_smooth(f):
        raise PreconditionFailed("is_projective requires a smooth fan")
    try:
        complete = is_complete(f, seed)
    except NotPure as exc:
        raise PreconditionFailed(str(exc)) from None
    if not complete:
        raise PreconditionFailed("is_projective requires a complete fan")
    equalities, gaps = projectivity_system(f)
    W = _wall_heights(f, gaps)
    nr = len(f.rays)
    # variables: h (free), s >= 0
    A_ge = [r + [-1] for r in W] + [[0] * nr + [-1]]
    b_ge = [0] * len(W) + [-1]
    res = solve_general([0] * nr + [1], (), (), A_ge, b_ge, nonneg=[False] * nr + [True], maximize=True)
    if res.status == "optimal" and res.value > 0:
        s = res.x[-1]
        h = [x / s for x in res.x[:-1]]
        forms = []
        for cone in f.max_cones:
            R = f.ray_matrix(cone)
            forms.append(solve_rational(R.T, [h[i] for i in cone]))
        return ProjectivityCertificate("feasible", forms=forms, equalities=equalities, gaps=gaps)
    nz = len(W)
    A_alt = [[W[k][i] for k in range(nz)] for i in range(nr)] + [[1] * nz]
    alt = solve_general([0] * nz, A_alt, [0] * nr + [1])
    if alt.status != "optimal":  # pragma: no cover - excluded by Farkas' lemma
        raise RuntimeError("neither the system nor its Farkas alternative is feasible")
    z = alt.x
    # z^T G vanishes on ker E, so it is -y^T E for some y
    E = [_row(f, *e) for e in equalities]
    G = [_row(f, *g) for g in gaps]
    target = [-sum(zk * G[k][j] for k, zk in enumerate(z)) for j in range(len(f.max_cones) * f.n)]
    y = solve_linear([[E[r][j] for r in range(len(E))] for j in range(len(target))], target)
    if y is None:  # pragma: no cover - guaranteed by the wall relations
        raise RuntimeError("Farkas multipliers do not lift to the per-cone system")
    return ProjectivityCertificate(
        "infeasible",
        equality_multipliers=y,
        gap_multipliers=z,
        equalities=equalities,
        gaps=gaps,
    )


def verify_projectivity(f: Fan, cert: ProjectivityCertificate) -> bool:
    """Re-check a certificate against the fan without any solver."""
    equalities, gaps = projectivity_system(f)
    if list(cert.equalities) != equalities or list(cert.gaps) != gaps:
        return False

    def pair(m_a, m_b, v):
        return sum((Fraction(x) - Fraction(y)) * z for x, y, z in zip(m_a, m_b, v))

    if cert.verdict == "feasible":
        forms = cert.forms
        if forms is None or len(forms) != len(f.max_cones) or any(len(m) != f.n for m in forms):
            return False
        return (all(pair(forms[a], forms[b], v) == 0 for a, b, v in equalities)
                and all(pair(forms[a], forms[b], v) > 0 for a, b, v in gaps))
    if cert.verdict == "infeasible":
        y, z = cert.equality_multipliers, cert.gap_multipliers
        if y is None or z is None or len(y) != len(equalities) or len(z) != len(gaps):
            return False
        if any(x < 0 for x in z) or sum(z) <= 0:
            return False
        total = [Fraction(0)] * (len(f.max_cones) * f.n)
        for coef, row in zip(list(y) + list(z), equalities + gaps):
            for j, x in enumerate(_row(f, *row)):
                total[j] += coef * x
        # sum z_i * (gap_i) = 0 identically, yet each gap >= 1: 0 >= sum z > 0
        return all(x == 0 for x in total)
    return False


# ---------------------------------------------------------------------------
# constructors

def projective_space(n: int) -> Fan:
    if n < 1:
        raise ValueError("n >= 1 required")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = [c for c in itertools.combinations(range(n + 1), n)]
    return Fan(n, rays, cones)


def product_p1(n: int) -> Fan:
    if n < 1:
        raise ValueError("n >= 1 required")
    rays = []
    for i in range(n):
        rays.append(tuple(int(i == j) for j in range(n)))
        rays.append(tuple(-int(i == j) for j in range(n)))
    cones = [tuple(2 * i + s for i, s in enumerate(signs)) for signs in itertools.product((0, 1), repeat=n)]
    return Fan(n, rays, cones)


def hirzebruch(a: int) -> Fan:
    if a < 0:
        raise ValueError("a >= 0 required")
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    return Fan(2, rays, [(0, 1), (1, 2), (2, 3), (0, 3)])


def affine_space(n: int) -> Fan:
    if n < 1:
        raise ValueError("n >= 1 required")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return Fan(n, rays, [tuple(range(n))])


def point_fan() -> Fan:
    """The fan of a point: rank 0, only the zero cone."""
    return Fan(0, [], [()])


def standard_fan(kind: str, param: int) -> Fan:
    builders = {
        "projective_space": projective_space,
        "product_p1": product_p1,
        "hirzebruch": hirzebruch,
        "affine_space": affine_space,
    }
    if kind not in builders:
        raise ValueError(f"unknown fan kind {kind!r}; expected one of {sorted(builders)}")
    return builders[kind](param)


def star_subdivide(f: Fan, cone_index: int) -> Fan:
    """Subdivide a maximal cone at the sum of its generators (a corner cut)."""
    cone = f.max_cones[cone_index]
    new = tuple(sum(f.rays[i][j] for i in cone) for j in range(f.n))
    g = math.gcd(*new)
    new = tuple(x // g for x in new)
    rays = list(f.rays) + [new]
    k = len(rays) - 1
    cones = [c for i, c in enumerate(f.max_cones) if i != cone_index]
    for drop in cone:
        cones.append(tuple(sorted([i for i in cone if i != drop] + [k])))
    return Fan(f.n, rays, cones)


def corner_cut_fans(count: int = 20, seed: int = DEFAULT_SEED, base: Fan | None = None) -> list[Fan]:
    """Seeded smooth complete surface fans: fan i has i + 1 corner cuts of the base."""
    rng = random.Random(seed)
    f = base if base is not None else projective_space(2)
    out = []
    for _ in range(count):
        f = star_subdivide(f, rng.randrange(len(f.max_cones)))
        out.append(f)
    return out
