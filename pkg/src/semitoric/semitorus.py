"""Semi-tori C^n / Gamma and their compactifications.

All lattices are given by exact generators. The lattice ``(2*pi*i Z)^n`` of
``(C*)^n`` is handled in units of ``2*pi*i``: every decision here is
invariant under a common complex scale, so the factor never materializes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactnum import ExactComplex, QuadReal, complex_rank, real_rank
from .fan import DEFAULT_SEED, Fan, NotPure, PreconditionFailed, is_complete, is_projective, is_smooth, validate_fan
from .logtoric import betti_numbers, d_invariant, strata_census

__all__ = [
    "ExtensionData",
    "HopfDatum",
    "NotHopf",
    "SemiTorusData",
    "SubgroupClosureReport",
    "ZeroDirection",
    "check_semi_torus",
    "fiber_product_analyze",
    "hopf_analyze",
    "one_parameter_closure",
]

SCHEMA_VERSION = 1
B1_AXIOM = "axiom: a Hopf surface is diffeomorphic to S^1 x S^3, so b1 = 1"
REMARK_TAG = "condition (2) => T(-log D) trivial; this direction needs no Kaehler hypothesis (Remark 1)"


class ZeroDirection(ValueError):
    pass


class NotHopf(ValueError):
    pass


def _cx(x) -> ExactComplex:
    return ExactComplex.coerce(x)


@dataclass(frozen=True)
class SemiTorusData:
    n: int
    generators: tuple

    def __init__(self, n: int, generators: Sequence[Sequence]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "generators", tuple(tuple(_cx(x) for x in g) for g in generators))

    def to_json(self):
        return {"n": self.n, "generators": [[z.to_json() for z in g] for g in self.generators]}

    @classmethod
    def from_json(cls, obj) -> SemiTorusData:
        return cls(obj["n"], [[ExactComplex.from_json(z) for z in g] for g in obj["generators"]])


def check_semi_torus(s: SemiTorusData) -> dict:
    """Discreteness (real independence) and complex spanning of the generators."""
    for k, g in enumerate(s.generators):
        if len(g) != s.n:
            raise ValueError(f"generator {k} has length {len(g)}, expected {s.n}")
    r = real_rank(s.generators)
    is_lattice = r == len(s.generators)
    spans = complex_rank(s.generators) == s.n if s.generators else s.n == 0
    semi = is_lattice and spans
    return {
        "is_lattice": is_lattice,
        "spans": spans,
        "is_semi_torus": semi,
        "is_compact": semi and r == 2 * s.n,
        "rank": r,
    }


# ---------------------------------------------------------------------------
# one-parameter subgroups of (C*)^2

@dataclass
class SubgroupClosureReport:
    direction: tuple
    verdict: str  # "closed" | "dense_in_positive_dim"
    quotient: dict
    subgroup_is_semi_torus: bool
    projected_lattice: tuple = ()

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "direction": [z.to_json() for z in self.direction],
            "verdict": self.verdict,
            "quotient": self.quotient,
            "subgroup_is_semi_torus": self.subgroup_is_semi_torus,
            "projected_lattice": [z.to_json() for z in self.projected_lattice],
        }


def _real_ratio(p: ExactComplex, q: ExactComplex):
    """p / q if it is real, else None (q nonzero)."""
    r = p / q
    return r.re if r.is_real() else None


def one_parameter_closure(a, b) -> SubgroupClosureReport:
    """Closure of ``t -> (exp(a t), exp(b t))`` in ``(C*)^2``.

    The preimage in C^2 is ``H + (2 pi i Z)^2`` with ``H = C (a, b)``. The
    projection ``(z1, z2) -> b z1 - a z2`` kills H and sends the lattice
    generators to ``b`` and ``-a`` (in units of 2 pi i); the subgroup is closed
    iff these generate a discrete subgroup of C.
    """
    a, b = _cx(a), _cx(b)
    if not a and not b:
        raise ZeroDirection("direction (0, 0) does not define a one-parameter subgroup")
    p1, p2 = b, -a
    gens = [g for g in (p1, p2) if g]
    if len(gens) == 1:
        # H is a coordinate axis and meets the lattice
        closed, rank = True, 1
        lattice = (gens[0],)
    elif real_rank([[p1], [p2]]) == 2:
        closed, rank = True, 2
        lattice = (p1, p2)
    else:
        ratio = _real_ratio(p1, p2)
        if ratio.is_rational():
            # p1 = (u/v) p2 with u/v reduced: the group is (p2 / v) Z
            r = ratio.a
            closed, rank = True, 1
            lattice = (p2 / r.denominator,)
        else:
            closed, rank = False, None
            lattice = (p1, p2)
    # Gamma cap H != 0 iff some nonzero integer pair is proportional to (a, b)
    if not a or not b:
        meets = True
    else:
        ratio = _real_ratio(b, a)
        meets = ratio is not None and ratio.is_rational()
    if closed and rank == 2:
        quotient = {"type": "compact_torus", "lattice": [z.to_json() for z in lattice], "real_rank": 2}
    elif closed:
        quotient = {"type": "C*", "lattice": [z.to_json() for z in lattice], "real_rank": 1}
    else:
        quotient = {"type": "non_hausdorff", "lattice": [], "real_rank": None}
    return SubgroupClosureReport(
        (a, b),
        "closed" if closed else "dense_in_positive_dim",
        quotient,
        meets,
        lattice,
    )


# ---------------------------------------------------------------------------
# fiber products over a compact torus

@dataclass(frozen=True)
class ExtensionData:
    g: int
    d: int
    periods: tuple  # 2g complex g-vectors
    rho: tuple  # 2g complex d-vectors, nonzero entries

    def __init__(self, g: int, d: int, periods: Sequence[Sequence], rho: Sequence[Sequence]):
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "periods", tuple(tuple(_cx(x) for x in p) for p in periods))
        object.__setattr__(self, "rho", tuple(tuple(_cx(x) for x in r) for r in rho))

    def problems(self) -> list[str]:
        out = []
        if len(self.periods) != 2 * self.g:
            out.append(f"expected {2 * self.g} periods, got {len(self.periods)}")
        if any(len(p) != self.g for p in self.periods):
            out.append("every period must be a g-vector")
        if not out and self.g and real_rank(self.periods) != 2 * self.g:
            out.append("periods do not have real rank 2g: the base torus is not compact")
        if len(self.rho) != len(self.periods):
            out.append("one rho vector per period is required")
        if any(len(r) != self.d for r in self.rho):
            out.append("every rho vector must be a d-vector")
        if any(not z for r in self.rho for z in r):
            out.append("rho entries must be nonzero")
        return out

    def to_json(self):
        return {
            "g": self.g,
            "d": self.d,
            "periods": [[z.to_json() for z in p] for p in self.periods],
            "rho": [[z.to_json() for z in r] for r in self.rho],
        }

    @classmethod
    def from_json(cls, obj) -> ExtensionData:
        return cls(obj["g"], obj["d"],
                   [[ExactComplex.from_json(z) for z in p] for p in obj["periods"]],
                   [[ExactComplex.from_json(z) for z in r] for r in obj["rho"]])


def fiber_product_analyze(e: ExtensionData, f: Fan, seed: int = DEFAULT_SEED) -> dict:
    """Invariants of ``(A x Lbar)/~`` for a semi-torus A over a compact torus."""
    bad = e.problems()
    if bad:
        raise PreconditionFailed("; ".join(bad))
    if f.n != e.d:
        raise PreconditionFailed(f"fan has rank {f.n} but the extension has d = {e.d}")
    if not validate_fan(f):
        raise PreconditionFailed("fan is not valid")
    if not is_smooth(f):
        raise PreconditionFailed("fan is not smooth")
    try:
        complete = is_complete(f, seed)
    except NotPure as exc:
        raise PreconditionFailed(str(exc)) from None
    if not complete:
        raise PreconditionFailed("fan is not complete")
    fiber_betti = betti_numbers(f) if f.n else [1]
    n = e.g + e.d
    # the fiber is simply connected, so b1 comes from the base torus only
    b1 = 2 * e.g + (fiber_betti[1] if len(fiber_betti) > 1 else 0)
    d_inv = n - b1 // 2
    fiber_d = d_invariant(f) if f.n else 0
    proj = is_projective(f, seed) if f.n else None
    census = strata_census(f)
    return {
        "schema_version": SCHEMA_VERSION,
        "dimension": n,
        "base_torus_dim": e.g,
        "fiber_rank": e.d,
        "fiber_betti": fiber_betti,
        "b1": b1,
        "d_invariant": d_inv,
        "fiber_d_invariant": fiber_d,
        "d_matches_extension_rank": d_inv == e.d,
        # the open part C^n/Lambda has b1 = 2g + d, giving d/2 instead
        "d_invariant_b1_source": "compactification",
        "d_invariant_with_open_b1": str(Fraction(e.d, 2)),
        "exact_sequence": {"kernel_dim": e.d, "group_dim": n, "albanese_dim": e.g,
                           "consistent": e.d + e.g == n and d_inv == e.d},
        "albanese": {"dim": e.g, "periods": [[z.to_json() for z in p] for p in e.periods]},
        "kaehler_sufficient": True if proj is None else proj.feasible,
        "kaehler_note": "projective fiber => compactification Kaehler (one direction only)",
        "rho_modulus_squared": [[z.abs2().to_json() for z in r] for r in e.rho],
        "rho_unitary": all(z.abs2() == 1 for r in e.rho for z in r),
        "orbit_census": census.to_json(),
        "boundary_empty": e.d == 0,
    }


# ---------------------------------------------------------------------------
# Hopf surfaces

@dataclass(frozen=True)
class HopfDatum:
    alpha: ExactComplex
    beta: ExactComplex

    def __init__(self, alpha, beta):
        object.__setattr__(self, "alpha", _cx(alpha))
        object.__setattr__(self, "beta", _cx(beta))

    def to_json(self):
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json()}

    @classmethod
    def from_json(cls, obj) -> HopfDatum:
        return cls(ExactComplex.from_json(obj["alpha"]), ExactComplex.from_json(obj["beta"]))


def _boundary_isotropy(moduli, fixed: int) -> dict:
    """Isotropy of T = (C*)^2 / <(alpha, beta)> at a point whose ``fixed``
    coordinate is nonzero and the other is 0.

    ``(t1, t2)`` fixes the point iff ``t_fixed`` lies in ``alpha^Z`` (resp.
    beta^Z); the identity component is the free coordinate's C*. Its lattice
    in the Lie algebra is ``Gamma cap (line of the free coordinate)``: an
    element ``k log(alpha, beta) + 2 pi i m`` lies there only if
    ``k log|alpha_fixed| = 0``, i.e. ``k = 0`` because the modulus exceeds 1.
    """
    free = 1 - fixed
    assert moduli[fixed] > 1
    gen = [0, 0]
    gen[free] = 1  # (2 pi i) e_free, in units of 2 pi i
    return {
        "point": "z1 = 0" if free == 0 else "z2 = 0",
        "dimension": 1,
        "type": "C*",
        "lattice": [gen],
        "is_semi_torus": check_semi_torus(SemiTorusData(1, [[1]]))["is_semi_torus"],
        "certificate": f"|{'alpha' if fixed == 0 else 'beta'}|^2 = {moduli[fixed]} > 1 forces k = 0",
    }


def hopf_analyze(h: HopfDatum) -> dict:
    """Orbit and isotropy structure of the Hopf surface of ``(alpha, beta)``."""
    ma, mb = h.alpha.abs2(), h.beta.abs2()
    if not ma > 1 or not mb > 1:
        raise NotHopf(f"need |alpha|^2 > 1 and |beta|^2 > 1, got {ma} and {mb}")
    iso = [
        {"point": "open orbit", "dimension": 0, "type": "trivial", "lattice": [], "is_semi_torus": True},
        _boundary_isotropy((ma, mb), 1),  # z1 = 0, z2 != 0
        _boundary_isotropy((ma, mb), 0),  # z2 = 0, z1 != 0
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "alpha": h.alpha.to_json(),
        "beta": h.beta.to_json(),
        "modulus_certificates": {"alpha_abs2": ma.to_json(), "beta_abs2": mb.to_json()},
        "semi_torus": {
            "description": "(C*)^2 / <(alpha, beta)>",
            "discrete": True,
            "discreteness_certificate": "log|alpha| > 0 separates the generator from (2 pi i Z)^2",
            "spans": True,
        },
        "orbits": 3,
        "orbit_list": ["open orbit (C*)^2 / <(alpha, beta)>", "curve z1 = 0", "curve z2 = 0"],
        "isotropy": iso,
        "isotropy_dimensions": [x["dimension"] for x in iso],
        "all_isotropy_semi_tori": all(x["is_semi_torus"] for x in iso),
        "b1": {"value": 1, "odd": True, "source": B1_AXIOM},
        "kaehler": False,
        "log_tangent_bundle_trivial": True,
        "conclusion": REMARK_TAG,
    }
