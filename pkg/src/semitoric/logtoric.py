"""Logarithmic tangent bundles of toric varieties.

Every chart of a smooth fan is an affine space ``C^k x (C*)^(n-k)`` whose
boundary is the coordinate hyperplane arrangement ``z_1 ... z_k = 0``. In the
logarithmic frame ``z_i d/dz_i`` the fundamental vector field of a lattice
vector ``a`` has constant coefficients ``R^-1 a``, so the frame is global
exactly when every chart matrix is unimodular.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .exactnum import DimensionMismatch, IntMatrix, invert_unimodular, smith_normal_form
from .fan import (
    Fan,
    FanError,
    NotPure,
    PreconditionFailed,
    cone_invariant_factors,
    cones_of_dim,
    is_complete,
    is_smooth,
)

__all__ = [
    "Chart",
    "IsotropyReport",
    "NonSmoothCone",
    "NotSnc",
    "SncCertificate",
    "StrataCensus",
    "TrivialityCertificate",
    "adjacent_pairs",
    "betti_numbers",
    "chart",
    "charts",
    "d_invariant",
    "detectors",
    "fundamental_field",
    "isotropy",
    "log_transition",
    "residue_matrix",
    "snc_certificate",
    "strata_census",
    "triviality_certificate",
    "verify_snc",
    "verify_triviality",
]

SCHEMA_VERSION = 1


class NonSmoothCone(FanError):
    def __init__(self, cone, invariant_factors):
        self.cone = tuple(cone)
        self.invariant_factors = list(invariant_factors)
        super().__init__(f"cone {list(cone)} is not smooth (invariant factors {self.invariant_factors})")


class NotSnc(FanError):
    def __init__(self, cone, invariant_factors):
        self.cone = tuple(cone)
        self.invariant_factors = list(invariant_factors)
        super().__init__(f"boundary is not s.n.c. at cone {list(cone)}")


def _completion(f: Fan, cone: Sequence[int]) -> tuple[IntMatrix, list]:
    """Unimodular matrix whose first columns are the cone's rays.

    With ``U R V = [I; 0]`` the matrix ``U^-1 diag(V^-1, I)`` starts with the
    columns of ``R``; the extra columns are recorded as the completion.
    """
    n, k = f.n, len(cone)
    if k == n:
        return f.ray_matrix(cone), []
    if k == 0:
        return IntMatrix.identity(n), [tuple(int(i == j) for i in range(n)) for j in range(n)]
    U, S, V = smith_normal_form(f.ray_matrix(cone))
    if any(S[i, i] != 1 for i in range(k)):
        raise NonSmoothCone(cone, [S[i, i] for i in range(k)])
    Uinv = invert_unimodular(U)
    Vinv = invert_unimodular(V)
    block = [[Vinv[i, j] if i < k and j < k else int(i == j) for j in range(n)] for i in range(n)]
    M = Uinv @ IntMatrix(block, n)
    assert M.columns()[:k] == [f.rays[i] for i in cone]
    return M, M.columns()[k:]


@dataclass(frozen=True)
class Chart:
    cone: tuple
    ray_matrix: IntMatrix
    dual_basis: IntMatrix  # rows pair to delta_ij with the columns of ray_matrix
    completion: tuple = ()

    @property
    def n(self) -> int:
        return self.ray_matrix.nrows

    @property
    def divisor_indices(self) -> tuple:
        return tuple(range(len(self.cone)))

    def local_equation(self) -> str:
        if not self.cone:
            return "1"
        return "*".join(f"z{i + 1}" for i in self.divisor_indices)


def chart(f: Fan, cone: Sequence[int]) -> Chart:
    cone = tuple(sorted(cone))
    inv = cone_invariant_factors(f, cone)
    if any(s != 1 for s in inv):
        raise NonSmoothCone(cone, inv)
    R, extra = _completion(f, cone)
    return Chart(cone, R, invert_unimodular(R), tuple(extra))


def charts(f: Fan) -> list[Chart]:
    return [chart(f, c) for c in f.max_cones]


def fundamental_field(ch: Chart, a: Sequence[int]) -> tuple:
    """Log-frame coefficients ``R^-1 a`` of the vector field generated by ``a``."""
    if len(a) != ch.n:
        raise DimensionMismatch(f"lattice vector of length {len(a)} in rank {ch.n}")
    return ch.dual_basis @ a


def log_transition(f: Fan, s1: Sequence[int], s2: Sequence[int]) -> IntMatrix:
    """Constant matrix ``R_s1^-1 R_s2`` relating the log frames of two charts."""
    c1, c2 = chart(f, s1), chart(f, s2)
    return c1.dual_basis @ c2.ray_matrix


# ---------------------------------------------------------------------------
# triviality certificate

@dataclass
class TrivialityCertificate:
    verdict: str
    frame: IntMatrix  # columns e_1..e_n of N
    chart_matrices: list = field(default_factory=list)  # (cone, C_sigma)
    failure_site: tuple | None = None
    failure_invariant_factors: list | None = None

    @property
    def trivial(self) -> bool:
        return self.verdict == "trivial"

    def to_json(self) -> dict:
        out = {
            "kind": "triviality",
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict,
            "frame": self.frame.tolist(),
            "charts": [{"cone": list(c), "matrix": m.tolist()} for c, m in self.chart_matrices],
        }
        if self.failure_site is not None:
            out["failure"] = {"cone": list(self.failure_site),
                              "invariant_factors": self.failure_invariant_factors}
        return out

    @classmethod
    def from_json(cls, obj) -> TrivialityCertificate:
        if obj.get("kind") != "triviality" or obj.get("schema_version") != SCHEMA_VERSION:
            raise FanError("not a triviality certificate of this schema version")
        frame = _int_rows(obj["frame"])
        n = len(frame)
        cert = cls(
            obj["verdict"],
            IntMatrix(frame, n),
            [(tuple(_int_list(ch["cone"])), IntMatrix(_int_rows(ch["matrix"]), n)) for ch in obj["charts"]],
        )
        if "failure" in obj:
            cert.failure_site = tuple(_int_list(obj["failure"]["cone"]))
            cert.failure_invariant_factors = _int_list(obj["failure"]["invariant_factors"])
        return cert


def _int_list(xs) -> list:
    if not isinstance(xs, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in xs):
        raise FanError(f"expected a list of integers, got {xs!r}")
    return xs


def _int_rows(rows) -> list:
    if not isinstance(rows, list):
        raise FanError(f"expected a matrix, got {rows!r}")
    rows = [_int_list(r) for r in rows]
    if any(len(r) != len(rows) for r in rows):
        raise FanError("expected a square matrix")
    return rows


def triviality_certificate(f: Fan) -> TrivialityCertificate:
    """Global log frame from the standard basis of N, or the first non-smooth cone."""
    frame = IntMatrix.identity(f.n)
    mats = []
    for cone in sorted(f.max_cones):
        inv = cone_invariant_factors(f, cone)
        if any(s != 1 for s in inv):
            return TrivialityCertificate("nontrivial", frame, mats, cone, inv)
        ch = chart(f, cone)
        mats.append((cone, ch.dual_basis @ frame))
    return TrivialityCertificate("trivial", frame, mats)


def verify_triviality(f: Fan, cert: TrivialityCertificate) -> bool:
    """Re-check a triviality certificate from the fan alone.

    The frame is the standard basis of N. Each listed matrix must be
    unimodular with ``R_sigma C_sigma = frame``; a trivial verdict lists every
    maximal cone in canonical order, a nontrivial one lists the cones before
    the failure cone, which must be the first non-smooth one with the stated
    invariant factors.
    """
    n = f.n
    if cert.frame != IntMatrix.identity(n):
        return False
    cones = sorted(f.max_cones)
    if cert.verdict == "trivial":
        if cert.failure_site is not None:
            return False
        checked = cones
    elif cert.verdict == "nontrivial":
        if cert.failure_site is None or cert.failure_site not in cones:
            return False
        checked = cones[: cones.index(cert.failure_site)]
    else:
        return False
    if [c for c, _ in cert.chart_matrices] != checked:
        return False
    for cone, C in cert.chart_matrices:
        if C.shape != (n, n) or not C.is_unimodular():
            return False
        try:
            R = chart(f, cone).ray_matrix
        except NonSmoothCone:
            return False
        if R @ C != cert.frame:
            return False
    if cert.verdict == "trivial":
        return True
    inv = cone_invariant_factors(f, cert.failure_site)
    return inv == cert.failure_invariant_factors and any(s != 1 for s in inv)


# ---------------------------------------------------------------------------
# residues, isotropy, strata

def residue_matrix(ch: Chart, m_list: Sequence[Sequence[int]]) -> IntMatrix:
    """Entry (i, j) is <m_j, v_i>, the residue along D_i in units of 2*pi*i.

    Rows run over the boundary rays of the chart, columns over the characters.
    """
    rays = ch.ray_matrix.columns()[: len(ch.cone)]
    for m in m_list:
        if len(m) != ch.n:
            raise DimensionMismatch(f"character of length {len(m)} in rank {ch.n}")
    return IntMatrix([[sum(a * b for a, b in zip(m, v)) for m in m_list] for v in rays], len(m_list))


@dataclass
class IsotropyReport:
    cone: tuple
    basis: list  # basis of N cap span(cone)
    rank: int
    saturation_index: int

    @property
    def is_semi_torus(self) -> bool:
        return self.saturation_index == 1

    def to_json(self):
        return {
            "cone": list(self.cone),
            "basis": [list(b) for b in self.basis],
            "rank": self.rank,
            "saturation_index": self.saturation_index,
            "is_semi_torus": self.is_semi_torus,
        }


def isotropy(f: Fan, cone: Sequence[int]) -> IsotropyReport:
    """Saturated sublattice N cap span(cone) and the index of the ray-generated one."""
    cone = tuple(sorted(cone))
    if not cone:
        return IsotropyReport(cone, [], 0, 1)
    U, S, _ = smith_normal_form(f.ray_matrix(cone))
    diag = [S[i, i] for i in range(len(cone))]
    rank = sum(1 for s in diag if s)
    Uinv = invert_unimodular(U)
    basis = Uinv.columns()[:rank]
    index = 1
    for s in diag[:rank]:
        index *= s
    return IsotropyReport(cone, basis, rank, index)


@dataclass
class StrataCensus:
    counts: dict
    closed_stratum_dim: int

    def to_json(self):
        return {"counts": {str(k): v for k, v in sorted(self.counts.items())},
                "closed_stratum_dim": self.closed_stratum_dim}


def strata_census(f: Fan) -> StrataCensus:
    top = max((len(c) for c in f.max_cones), default=0)
    counts = {k: len(cones_of_dim(f, k)) for k in range(top + 1)}
    return StrataCensus(counts, top)


def _require_smooth_complete(f: Fan):
    if not is_smooth(f):
        raise PreconditionFailed("fan is not smooth")
    try:
        ok = is_complete(f)
    except NotPure as exc:
        raise PreconditionFailed(str(exc)) from None
    if not ok:
        raise PreconditionFailed("fan is not complete")


def betti_numbers(f: Fan) -> list[int]:
    """b_0..b_2n of the toric variety; odd Betti numbers vanish."""
    _require_smooth_complete(f)
    n = f.n
    d = [len(cones_of_dim(f, j)) for j in range(n + 1)]
    out = [0] * (2 * n + 1)
    for k in range(n + 1):
        out[2 * k] = sum((-1) ** (i - k) * comb(i, k) * d[n - i] for i in range(k, n + 1))
    return out


def d_invariant(f: Fan) -> int:
    """n - b_1/2 with b_1 of the compact toric variety."""
    b = betti_numbers(f)
    return f.n - b[1] // 2 if len(b) > 1 else f.n


@dataclass
class SncCertificate:
    charts: list  # (cone, divisor indices, local equation)

    def to_json(self):
        return {
            "kind": "snc",
            "schema_version": SCHEMA_VERSION,
            "charts": [{"cone": list(c), "divisor_indices": list(d), "equation": eq}
                       for c, d, eq in self.charts],
        }


    @classmethod
    def from_json(cls, obj) -> SncCertificate:
        if obj.get("kind") != "snc" or obj.get("schema_version") != SCHEMA_VERSION:
            raise FanError("not an s.n.c. certificate of this schema version")
        return cls([(tuple(_int_list(ch["cone"])), tuple(_int_list(ch["divisor_indices"])), ch["equation"])
                    for ch in obj["charts"]])


def snc_certificate(f: Fan) -> SncCertificate:
    out = []
    for cone in sorted(f.max_cones):
        inv = cone_invariant_factors(f, cone)
        if any(s != 1 for s in inv):
            raise NotSnc(cone, inv)
        ch = chart(f, cone)
        out.append((cone, ch.divisor_indices, ch.local_equation()))
    return SncCertificate(out)


def verify_snc(f: Fan, cert: SncCertificate) -> bool:
    """Every maximal cone is listed once, in order, with its smooth local model."""
    try:
        expected = snc_certificate(f)
    except NotSnc:
        return False
    return list(cert.charts) == list(expected.charts)


def adjacent_pairs(f: Fan) -> list[tuple]:
    """Ordered pairs of maximal cones sharing a codimension-one face."""
    out = []
    for a, b in itertools.permutations(range(len(f.max_cones)), 2):
        if len(set(f.max_cones[a]) & set(f.max_cones[b])) == f.n - 1:
            out.append((f.max_cones[a], f.max_cones[b]))
    return out


def detectors(f: Fan) -> dict:
    """The four equivalent verdicts: smooth, s.n.c., trivial frame, semi-torus isotropy."""
    smooth = bool(is_smooth(f))
    try:
        snc_certificate(f)
        snc = True
    except NotSnc:
        snc = False
    trivial = triviality_certificate(f).trivial
    iso = True
    for k in range(max((len(c) for c in f.max_cones), default=0) + 1):
        for c in cones_of_dim(f, k):
            if not isotropy(f, c).is_semi_torus:
                iso = False
    return {"smooth": smooth, "snc": snc, "trivial": trivial, "isotropy_semi_tori": iso}

