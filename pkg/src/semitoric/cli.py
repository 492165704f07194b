"""Command-line front end: corpus I/O, reports, certificate re-checking and
batch scans over fan families.

Every command builds a structured report (a JSON-compatible dict); the text
rendering is produced from it. Exit status is 0 whenever a decision was
reached, 1 on bad input and 2 on bad usage.
"""

from __future__ import annotations

import argparse
import functools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import chartcalc, exactnum, fan as fanmod, logtoric, semitorus
from .exactnum import ExactComplex, IntMatrix, QuadReal, parse_rational
from .fan import DEFAULT_SEED, Fan, FanError, PreconditionFailed

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2


class InputError(Exception):
    """Base for problems with user-supplied data (exit status 1)."""

    def to_json(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class ParseError(InputError):
    def __init__(self, path, message, line=None, column=None, field=None):
        self.path = str(path)
        self.line = line
        self.column = column
        self.field = field
        where = self.path
        if line is not None:
            where += f":{line}:{column}"
        if field is not None:
            where += f" [{field}]"
        super().__init__(f"{where}: {message}")
        self.detail = message

    def to_json(self):
        out = {"error": "ParseError", "path": self.path, "message": self.detail}
        if self.line is not None:
            out["line"] = self.line
            out["column"] = self.column
        if self.field is not None:
            out["field"] = self.field
        return out


class ValidationError(InputError):
    def __init__(self, path, violations: list):
        self.path = str(path)
        self.violations = violations
        first = violations[0]["message"] if violations else "invalid"
        kinds = sorted({v["kind"] for v in violations})
        super().__init__(f"{self.path}: {', '.join(kinds)}: {first}")

    def to_json(self):
        return {"error": "ValidationError", "path": self.path, "violations": self.violations}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing

def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(path, exc.strerror or str(exc)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.msg, line=exc.lineno, column=exc.colno) from None


def _field_of(message: str) -> str | None:
    head = message.split(":", 1)[0]
    if head.startswith("field "):
        return head[len("field "):].strip("'")
    if "[" in head and head.endswith("]"):
        return head
    return None


def parse_fan(path, validate: bool = True) -> Fan:
    obj = _load_json(path)
    try:
        f = Fan.from_json(obj)
    except FanError as exc:
        raise ParseError(path, str(exc), field=_field_of(str(exc))) from None
    if validate:
        rep = fanmod.validate_fan(f)
        if not rep:
            raise ValidationError(path, rep.to_json()["violations"])
    return f


def _wrap(path, build, obj):
    try:
        return build(obj)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(path, f"{type(exc).__name__}: {exc}") from None


def parse_semitorus(path) -> semitorus.SemiTorusData:
    return _wrap(path, semitorus.SemiTorusData.from_json, _load_json(path))


def parse_extension(path) -> semitorus.ExtensionData:
    e = _wrap(path, semitorus.ExtensionData.from_json, _load_json(path))
    bad = e.problems()
    if bad:
        raise ValidationError(path, [{"kind": "extension", "location": "", "message": m} for m in bad])
    return e


def parse_hopf(path) -> semitorus.HopfDatum:
    return _wrap(path, semitorus.HopfDatum.from_json, _load_json(path))


def parse_field(path) -> chartcalc.ChartVectorField:
    return _wrap(path, chartcalc.ChartVectorField.from_json, _load_json(path))


def parse_form(path) -> chartcalc.LogOneForm:
    return _wrap(path, chartcalc.LogOneForm.from_json, _load_json(path))


def _parse_real(text: str) -> QuadReal:
    # "p/q" or "p/q:r/s" for p/q + (r/s) sqrt(d)
    if ":" in text:
        a, b = text.split(":", 1)
        return QuadReal.from_json([a, b])
    return QuadReal(parse_rational(text))


def parse_complex_arg(text: str) -> ExactComplex:
    """Command-line complex number: ``re`` or ``re,im``; JSON pairs also accepted."""
    text = text.strip()
    try:
        if text.startswith("["):
            return ExactComplex.from_json(json.loads(text))
        parts = text.split(",")
        if len(parts) == 1:
            return ExactComplex(_parse_real(parts[0]), 0)
        if len(parts) == 2:
            return ExactComplex(_parse_real(parts[0]), _parse_real(parts[1]))
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad complex number {text!r}: {exc}") from None
    raise UsageError(f"bad complex number {text!r}")


def parse_matrix_arg(text: str) -> IntMatrix:
    try:
        rows = json.loads(text)
        if not isinstance(rows, list) or not rows:
            raise ValueError("expected a nonempty list of rows")
        for r in rows:
            if not isinstance(r, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in r):
                raise ValueError("rows must be lists of integers")
        return IntMatrix(rows, len(rows[0]))
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad matrix {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# family manifests

@dataclass
class Member:
    id: str
    fan_path: str
    extension_path: str | None = None


@dataclass
class FamilyManifest:
    members: list[Member] = field(default_factory=list)
    jobs: int = 1

    @classmethod
    def load(cls, path) -> FamilyManifest:
        obj = _load_json(path)
        base = os.path.dirname(os.path.abspath(path))
        if not isinstance(obj, dict) or not isinstance(obj.get("members"), list):
            raise ParseError(path, "manifest must be an object with a 'members' list", field="members")
        members, seen = [], set()
        for k, m in enumerate(obj["members"]):
            loc = f"members[{k}]"
            if not isinstance(m, dict) or not isinstance(m.get("id"), str) or not isinstance(m.get("fan"), str):
                raise ParseError(path, "member needs string fields 'id' and 'fan'", field=loc)
            if m["id"] in seen:
                raise ParseError(path, f"duplicate member id {m['id']!r}", field=f"{loc}.id")
            seen.add(m["id"])
            ext = m.get("extension")
            if ext is not None and not isinstance(ext, str):
                raise ParseError(path, "'extension' must be a path", field=f"{loc}.extension")
            members.append(Member(m["id"], os.path.join(base, m["fan"]),
                                  os.path.join(base, ext) if ext else None))
        opts = obj.get("options", {})
        jobs = opts.get("jobs", 1) if isinstance(opts, dict) else 1
        if not isinstance(jobs, int) or isinstance(jobs, bool) or jobs < 1:
            raise ParseError(path, "options.jobs must be a positive integer", field="options.jobs")
        manifest = cls(members, jobs)
        # all referenced files must parse; geometric problems are per-member verdicts
        for m in members:
            parse_fan(m.fan_path, validate=False)
            if m.extension_path:
                _wrap(m.extension_path, semitorus.ExtensionData.from_json, _load_json(m.extension_path))
        return manifest


@dataclass
class ScanResult:
    members: list[dict]

    @property
    def S(self) -> list[int]:
        return [k for k, m in enumerate(self.members) if m["in_S"]]

    def partition(self) -> dict:
        parts: dict = {}
        for k, m in enumerate(self.members):
            parts.setdefault(m["verdict"], []).append(k)
        return dict(sorted(parts.items()))

    def to_json(self):
        return {
            "S": self.S,
            "S_ids": [self.members[k]["id"] for k in self.S],
            "partition": self.partition(),
            "members": self.members,
        }


def scan_member(member: Member, seed: int = DEFAULT_SEED) -> dict:
    """s.n.c. stage, then the frame stage; failures become this member's verdict."""
    out = {"id": member.id, "fan": os.path.basename(member.fan_path)}
    try:
        f = parse_fan(member.fan_path)
    except InputError as exc:
        out.update(in_S=False, verdict="error", error=exc.to_json())
        return out
    try:
        snc = logtoric.snc_certificate(f)
        out["snc"] = {"verdict": "snc", "certificate": snc.to_json()}
    except logtoric.NotSnc as exc:
        out["snc"] = {"verdict": "not_snc", "failure": {"cone": list(exc.cone),
                                                        "invariant_factors": exc.invariant_factors}}
    cert = logtoric.triviality_certificate(f)
    out["frame"] = {"verdict": cert.verdict, "certificate": cert.to_json()}
    in_s = out["snc"]["verdict"] == "snc" and cert.trivial
    out["in_S"] = in_s
    out["verdict"] = "in_S" if in_s else "not_in_S"
    if member.extension_path:
        try:
            e = parse_extension(member.extension_path)
            out["extension"] = semitorus.fiber_product_analyze(e, f, seed)
        except (InputError, PreconditionFailed) as exc:
            out["extension"] = {"error": type(exc).__name__, "message": str(exc)}
    return out


def _scan_star(args):
    return scan_member(*args)


def family_scan(manifest: FamilyManifest, seed: int = DEFAULT_SEED, jobs: int | None = None) -> ScanResult:
    jobs = manifest.jobs if jobs is None else jobs
    work = [(m, seed) for m in manifest.members]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_star, work))  # map keeps manifest order
    else:
        results = [scan_member(*w) for w in work]
    return ScanResult(results)


# ---------------------------------------------------------------------------
# commands

def _fan_doc(f: Fan) -> dict:
    return f.to_json()


def cmd_fan_check(args) -> dict:
    f = parse_fan(args.fan, validate=False)
    rep = fanmod.validate_fan(f)
    out = {"fan": _fan_doc(f), "validation": rep.to_json()}
    if not rep:
        out["verdict"] = "invalid"
        return out
    smooth = fanmod.is_smooth(f)
    out["smoothness"] = smooth.to_json()
    try:
        out["completeness"] = fanmod.is_complete(f, args.seed).to_json()
    except fanmod.NotPure as exc:
        out["completeness"] = {"complete": False, "reason": str(exc)}
    try:
        out["snc"] = {"verdict": "snc", "certificate": logtoric.snc_certificate(f).to_json()}
    except logtoric.NotSnc as exc:
        out["snc"] = {"verdict": "not_snc", "failure": {"cone": list(exc.cone),
                                                        "invariant_factors": exc.invariant_factors}}
    out["detectors"] = logtoric.detectors(f)
    out["verdict"] = "valid"
    return out


def cmd_fan_strata(args) -> dict:
    f = parse_fan(args.fan)
    census = logtoric.strata_census(f)
    cones = []
    for k in range(census.closed_stratum_dim + 1):
        for c in fanmod.cones_of_dim(f, k):
            rep = logtoric.isotropy(f, c).to_json()
            rep["orbit_dim"] = f.n - k
            cones.append(rep)
    return {
        "fan": _fan_doc(f),
        "census": census.to_json(),
        "isotropy": cones,
        "all_isotropy_semi_tori": all(c["is_semi_torus"] for c in cones),
    }


def cmd_fan_betti(args) -> dict:
    f = parse_fan(args.fan)
    b = logtoric.betti_numbers(f)
    return {"fan": _fan_doc(f), "betti": b, "b1": b[1] if len(b) > 1 else 0,
            "euler_characteristic": sum((-1) ** k * x for k, x in enumerate(b)),
            "d_invariant": logtoric.d_invariant(f),
            # b1 of the open orbit (C*)^n is n, which would give n/2 instead
            "d_invariant_b1_source": "compactification",
            "d_invariant_with_open_b1": str(Fraction(f.n, 2))}


def cmd_fan_projective(args) -> dict:
    f = parse_fan(args.fan)
    cert = fanmod.is_projective(f, args.seed)
    return {"fan": _fan_doc(f), "verdict": cert.verdict, "certificate": cert.to_json(),
            "verified": fanmod.verify_projectivity(f, cert)}


def cmd_fan_frame_cert(args) -> dict:
    f = parse_fan(args.fan)
    cert = logtoric.triviality_certificate(f)
    return {"fan": _fan_doc(f), "verdict": cert.verdict, "certificate": cert.to_json(),
            "verified": logtoric.verify_triviality(f, cert)}


def cmd_fan_residues(args) -> dict:
    f = parse_fan(args.fan)
    rows = []
    for cone in sorted(f.max_cones):
        try:
            ch = logtoric.chart(f, cone)
        except logtoric.NonSmoothCone as exc:
            rows.append({"cone": list(cone), "error": str(exc)})
            continue
        k = len(cone)
        dual = ch.dual_basis.tolist()[:k]
        R = logtoric.residue_matrix(ch, dual)
        rows.append({"cone": list(cone), "characters": dual, "residues": R.tolist(),
                     "identity": R == IntMatrix.identity(k)})
    return {"fan": _fan_doc(f), "units": "2*pi*i", "charts": rows,
            "all_identity": all(r.get("identity", False) for r in rows)}


def _divisor_arg(text, n):
    if text is None:
        return None
    if text == "":
        return []
    try:
        idx = sorted({int(x) for x in text.split(",")})
    except ValueError:
        raise UsageError(f"bad divisor index list {text!r}") from None
    if any(not 0 <= i < n for i in idx):
        raise UsageError(f"divisor indices must lie in 0..{n - 1}")
    return idx


def _orders(v: chartcalc.ChartVectorField) -> list:
    out = []
    for i in range(v.n):
        row = {"index": i, "ordinary": _order_json(chartcalc.vanishing_order(v, i, "ordinary"))}
        if i in v.divisor_indices:
            row["log"] = _order_json(chartcalc.vanishing_order(v, i, "log"))
        out.append(row)
    return out


def _order_json(x):
    return "inf" if x == chartcalc.INFINITY else int(x)


def _apply_map(args, v):
    if args.map is None:
        return v, None
    phi = chartcalc.MonomialMap(parse_matrix_arg(args.map))
    target_div = _divisor_arg(args.divisor, phi.A.ncols)
    w = chartcalc.pushforward(chartcalc.to_log_frame(v), phi, target_div)
    return w, phi


def cmd_chart_pushforward(args) -> dict:
    v = parse_field(args.field)
    w, phi = _apply_map(args, v)
    return {"source": v.to_json(), "map": phi.A.tolist(), "log_frame": w.to_json(),
            "ordinary_frame": chartcalc.from_log_frame(w).to_json(), "orders": _orders(w)}


def cmd_chart_orders(args) -> dict:
    v = parse_field(args.field)
    w, phi = _apply_map(args, v)
    out = {"field": w.to_json(), "orders": _orders(w)}
    if phi is not None:
        out["map"] = phi.A.tolist()
    return out


def cmd_form_closed(args) -> dict:
    omega = parse_form(args.form)
    rep = chartcalc.d_closed(omega)
    res = [{"index": i, "residue": chartcalc.residue(omega, i).to_json(),
            "constant": chartcalc.residue(omega, i).is_constant()}
           for i in sorted(omega.divisor_indices)]
    return {"form": omega.to_json(), "verdict": "closed" if rep.closed else "not_closed",
            "closedness": rep.to_json(), "residues": res, "units": "2*pi*i"}


def cmd_semitorus_check(args) -> dict:
    s = parse_semitorus(args.data)
    try:
        rep = semitorus.check_semi_torus(s)
    except ValueError as exc:
        raise ParseError(args.data, str(exc), field="generators") from None
    return {"data": s.to_json(), **rep}


def cmd_semitorus_closure(args) -> dict:
    a, b = parse_complex_arg(args.a), parse_complex_arg(args.b)
    try:
        return semitorus.one_parameter_closure(a, b).to_json()
    except semitorus.ZeroDirection as exc:
        raise InputError(str(exc)) from None


def cmd_extension_analyze(args) -> dict:
    e = parse_extension(args.data)
    if args.fan is None:
        if e.d != 0:
            raise UsageError("--fan is required when d > 0")
        f = fanmod.point_fan()
    else:
        f = parse_fan(args.fan)
    return {"extension": e.to_json(), **semitorus.fiber_product_analyze(e, f, args.seed)}


def cmd_hopf_analyze(args) -> dict:
    if args.data is not None:
        h = parse_hopf(args.data)
    elif args.alpha is not None and args.beta is not None:
        h = semitorus.HopfDatum(parse_complex_arg(args.alpha), parse_complex_arg(args.beta))
    else:
        raise UsageError("give a datum file or both --alpha and --beta")
    try:
        return semitorus.hopf_analyze(h)
    except semitorus.NotHopf as exc:
        raise InputError(str(exc)) from None


def cmd_family_scan(args) -> dict:
    m = FamilyManifest.load(args.manifest)
    return family_scan(m, args.seed, args.jobs).to_json()


@functools.lru_cache(maxsize=64)
def _fan_is_valid(f: Fan) -> bool:
    return fanmod.validate_fan(f).valid


_KIND_BY_COMMAND = {"fan frame-cert": "triviality", "fan projective": "projectivity"}


def verify_document(doc, fan_obj=None) -> tuple[bool, str, str | None]:
    """Re-check a certificate or a certificate report. Returns (ok, kind, reason)."""
    if not isinstance(doc, dict):
        return False, "unknown", "certificate must be a JSON object"
    if "certificate" in doc:
        cert = doc["certificate"]
        if doc.get("schema_version") != SCHEMA_VERSION:
            return False, "unknown", "unsupported report schema version"
        if not isinstance(cert, dict):
            return False, "unknown", "certificate must be a JSON object"
        expected = _KIND_BY_COMMAND.get(doc.get("command"))
        if expected is None or cert.get("kind") != expected:
            return False, str(cert.get("kind")), "report command does not match certificate kind"
        if doc.get("verdict") != cert.get("verdict"):
            return False, expected, "report verdict differs from certificate verdict"
        if "verified" in doc and doc["verified"] is not True:
            return False, expected, "report does not claim verification"
        fan_obj = doc.get("fan", fan_obj)
    else:
        cert = doc
    kind = str(cert.get("kind"))
    if fan_obj is None:
        return False, kind, "no fan given (embed it or pass --fan)"
    try:
        f = Fan.from_json(fan_obj)
    except FanError as exc:
        return False, kind, f"fan: {exc}"
    if not _fan_is_valid(f):
        return False, kind, "fan is not valid"
    try:
        if kind == "triviality":
            ok = logtoric.verify_triviality(f, logtoric.TrivialityCertificate.from_json(cert))
        elif kind == "projectivity":
            ok = fanmod.verify_projectivity(f, fanmod.ProjectivityCertificate.from_json(cert))
        elif kind == "snc":
            ok = logtoric.verify_snc(f, logtoric.SncCertificate.from_json(cert))
        else:
            return False, kind, "unknown certificate kind"
    except (FanError, KeyError, TypeError, ValueError, IndexError, exactnum.DimensionMismatch) as exc:
        return False, kind, f"malformed certificate: {exc}"
    return ok, kind, None if ok else "certificate does not check against the fan"


def cmd_verify_cert(args) -> dict:
    doc = _load_json(args.cert)
    fan_obj = _load_json(args.fan) if args.fan else None
    ok, kind, reason = verify_document(doc, fan_obj)
    out = {"kind": kind, "verdict": "accepted" if ok else "rejected"}
    if reason:
        out["reason"] = reason
    return out


# ---------------------------------------------------------------------------
# rendering and dispatch

def render_text(obj, indent: int = 0) -> str:
    """Readable rendering of a structured report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, dict) for x in v) and len(json.dumps(v)) <= 72


def _scalar(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, str):
        return v
    return json.dumps(v, separators=(", ", ": "))


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "structured":
        stream.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        stream.write(render_text(report) + "\n")


COMMANDS = {
    ("fan", "check"): cmd_fan_check,
    ("fan", "strata"): cmd_fan_strata,
    ("fan", "betti"): cmd_fan_betti,
    ("fan", "projective"): cmd_fan_projective,
    ("fan", "frame-cert"): cmd_fan_frame_cert,
    ("fan", "residues"): cmd_fan_residues,
    ("chart", "pushforward"): cmd_chart_pushforward,
    ("chart", "orders"): cmd_chart_orders,
    ("form", "closed"): cmd_form_closed,
    ("semitorus", "check"): cmd_semitorus_check,
    ("semitorus", "closure"): cmd_semitorus_closure,
    ("extension", "analyze"): cmd_extension_analyze,
    ("hopf", "analyze"): cmd_hopf_analyze,
    ("family", "scan"): cmd_family_scan,
    ("verify-cert", None): cmd_verify_cert,
}


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _common(top: bool) -> argparse.ArgumentParser:
    # subcommands repeat the options without defaults so they never clobber
    # values given before the subcommand
    def d(value):
        return value if top else argparse.SUPPRESS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default=d("text"))
    common.add_argument("--seed", type=_seed, default=d(DEFAULT_SEED))
    common.add_argument("--sqrt", type=int, default=d(None), metavar="D",
                        help="square-free d > 1 for numbers a + b*sqrt(d)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(False)
    p = argparse.ArgumentParser(prog="semitoric", parents=[_common(True)],
                                description="Exact decisions and certificates for log tangent bundles of toric data.")
    groups = p.add_subparsers(dest="group", required=True)

    g = groups.add_parser("fan", parents=[common]).add_subparsers(dest="action", required=True)
    for name in ("check", "strata", "betti", "projective", "frame-cert", "residues"):
        g.add_parser(name, parents=[common]).add_argument("fan")

    g = groups.add_parser("chart", parents=[common]).add_subparsers(dest="action", required=True)
    sp = g.add_parser("pushforward", parents=[common])
    sp.add_argument("field")
    sp.add_argument("--map", required=True, help="unimodular exponent matrix as JSON rows")
    sp.add_argument("--divisor", help="comma-separated boundary indices of the target chart")
    sp = g.add_parser("orders", parents=[common])
    sp.add_argument("field")
    sp.add_argument("--map")
    sp.add_argument("--divisor")

    g = groups.add_parser("form", parents=[common]).add_subparsers(dest="action", required=True)
    g.add_parser("closed", parents=[common]).add_argument("form")

    g = groups.add_parser("semitorus", parents=[common]).add_subparsers(dest="action", required=True)
    g.add_parser("check", parents=[common]).add_argument("data")
    sp = g.add_parser("closure", parents=[common])
    sp.add_argument("--a", required=True, help="re or re,im; parts are p/q or p/q:r/s")
    sp.add_argument("--b", required=True)

    g = groups.add_parser("extension", parents=[common]).add_subparsers(dest="action", required=True)
    sp = g.add_parser("analyze", parents=[common])
    sp.add_argument("data")
    sp.add_argument("--fan")

    g = groups.add_parser("hopf", parents=[common]).add_subparsers(dest="action", required=True)
    sp = g.add_parser("analyze", parents=[common])
    sp.add_argument("data", nargs="?")
    sp.add_argument("--alpha")
    sp.add_argument("--beta")

    g = groups.add_parser("family", parents=[common]).add_subparsers(dest="action", required=True)
    sp = g.add_parser("scan", parents=[common])
    sp.add_argument("manifest")
    sp.add_argument("--jobs", type=int, default=None)

    sp = groups.add_parser("verify-cert", parents=[common])
    sp.add_argument("cert")
    sp.add_argument("--fan")
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(list(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    key = (args.group, getattr(args, "action", None))
    command = " ".join(k for k in key if k)
    previous = exactnum.configured_extension()
    try:
        if args.sqrt is not None:
            exactnum.set_extension(args.sqrt)
        report = COMMANDS[key](args)
    except UsageError as exc:
        stderr.write(f"semitoric: usage error: {exc}\n")
        return EXIT_USAGE
    except (InputError, PreconditionFailed, chartcalc.NotLogarithmic, chartcalc.NonUnimodularMap,
            exactnum.FieldMismatch, ValueError) as exc:
        err = exc.to_json() if isinstance(exc, InputError) else {"error": type(exc).__name__, "message": str(exc)}
        emit({"schema_version": SCHEMA_VERSION, "command": command, **err}, args.format, stdout)
        stderr.write(f"semitoric: {exc}\n")
        return EXIT_INPUT
    finally:
        exactnum.set_extension(previous)
    report = {"schema_version": SCHEMA_VERSION, "command": command, **report}
    emit(report, args.format, stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
