"""Canonical JSON, a content-addressed certificate store, and re-verification."""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import os
from pathlib import Path

from .exact_arith import CircleInterval, TorusPoint, parse_rational
from .index_sets import IndexSet

__all__ = ["CertificateStore", "VerifyResult", "canonical_json", "verify_artifact", "verify_path"]

STORE_ENV = "INTERPOLAB_STORE"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


class CertificateStore:
    """``<root>/<schema-name>/<sha256>.json`` plus a ``.meta.json`` sidecar.

    Timestamps live only in the sidecar, so artifacts stay byte-identical
    across runs.
    """

    def __init__(self, root: str | os.PathLike | None = None):
        root = root if root is not None else os.environ.get(STORE_ENV)
        if not root:
            raise ValueError(f"no store directory (set {STORE_ENV})")
        self.root = Path(root)

    def put(self, artifact: dict) -> Path:
        schema = artifact.get("schema")
        if not schema:
            raise ValueError("artifact has no schema field")
        kind = schema.split("/")[-1].split("@")[0]
        digest = content_hash(artifact)
        folder = self.root / kind
        folder.mkdir(parents=True, exist_ok=True)
        path = folder / f"{digest}.json"
        path.write_text(canonical_json(artifact))
        meta = {"stored_at": _dt.datetime.now(_dt.timezone.utc).isoformat(), "sha256": digest}
        (folder / f"{digest}.meta.json").write_text(canonical_json(meta))
        return path

    def load(self, path: str | os.PathLike) -> dict:
        data = json.loads(Path(path).read_text())
        result = verify_artifact(data)
        if not result.ok:
            raise ValueError(f"stored artifact fails verification: {result.detail}")
        return data

    def entries(self):
        return sorted(p for p in self.root.rglob("*.json") if not p.name.endswith(".meta.json"))


class VerifyResult:
    def __init__(self, ok: bool, schema: str, detail: str = ""):
        self.ok = ok
        self.schema = schema
        self.detail = detail

    def __repr__(self):
        return f"VerifyResult(ok={self.ok}, schema={self.schema!r}, detail={self.detail!r})"


def _verify_separability(data) -> tuple[bool, str]:
    from .separability import SeparabilityCertificate

    cert = SeparabilityCertificate.from_json(data)
    if set(cert.A) & set(cert.B):
        return False, "A and B overlap"
    return cert.verify(), f"achieved {cert.achieved} >= {cert.epsilon}"


def _verify_nonseparability(data) -> tuple[bool, str]:
    from .separability import NonSeparabilityVerdict

    v = NonSeparabilityVerdict.from_json(data)
    return v.verify(), f"exact sup {v.sup_achieved} < {v.epsilon}"


def _verify_interpolant(data) -> tuple[bool, str]:
    from .interpolation import Interpolant, TargetSequence, verify_interpolation

    psi = Interpolant.from_json(data)
    if "target" not in data:
        return False, "interpolant artifact carries no target"
    target = TargetSequence.from_json(data["target"])
    rep = verify_interpolation(psi, target.E, target)
    expected = data.get("max_error")
    if expected is not None and parse_rational(expected) != rep.max_error:
        return False, f"stored max_error {expected} but recomputed {rep.max_error}"
    return rep.passed and rep.node_exact, f"max error {rep.max_error}"


def _verify_witness(data) -> tuple[bool, str]:
    from .nilseq import TwoStepWitness, check_growth, verify_two_step_witness

    w = TwoStepWitness.from_json(data)
    if w.N == 0:
        return True, "vacuous"
    if not check_growth(w.s.elements, w.ell):
        return False, "s does not grow fast enough"
    if not w.enclosure.contains(w.alpha):
        return False, "alpha outside its enclosure"
    v = verify_two_step_witness(w, w.N, 3 * w.ell)
    return v.passed, f"{v.pairs_checked} pairs, failures {list(v.failures)}"


def _verify_partition(data) -> tuple[bool, str]:
    from .recurrence import PartitionTrace, Stage, SupMinResult

    stages = []
    for s in data["stages"]:
        stages.append(Stage(parse_rational(s["epsilon"]), IndexSet.from_json(s["A"]), IndexSet.from_json(s["B"]),
                            int(s["N_A"]), int(s["N_B"]), SupMinResult.from_json(s["cert_A"]),
                            SupMinResult.from_json(s["cert_B"])))
    trace = PartitionTrace(IndexSet.from_json(data["R"]),
                           tuple(parse_rational(e["epsilon"]) for e in data["schedule"]),
                           tuple(stages), IndexSet.from_json(data["residual"]), data.get("stopped_at"))
    return trace.check(), f"{len(stages)} stages"


def _verify_supmin(data) -> tuple[bool, str]:
    from . import _tents

    R = [int(r) for r in data["R"]]
    value = parse_rational(data["value"])
    x = TorusPoint.from_json(data["argmax"]).coords[0]
    ok = _tents.tent_min(R, x) == value and _tents.supmin(R)[0] == value
    return ok, f"supmin {value}"


def _verify_gap(data) -> tuple[bool, str]:
    from .riesz import correlation_gap_check

    cfg = data["config"]
    rep = correlation_gap_check(int(cfg["n_max"]), cfg["delta"], int(cfg["seed"]), cfg["mode"])
    ok = rep.passed and parse_rational(data["min_gap"]) == rep.min_gap
    return ok, f"min gap {rep.min_gap} vs bound {rep.bound}"


def _verify_orbit(data) -> tuple[bool, str]:
    from .recurrence import doubling_orbit

    cfg = data["config"]
    arc = CircleInterval.from_json(cfg["forbidden"])
    rows = doubling_orbit(int(cfg["n_max"]), arc, n_min=int(cfg.get("n_min", 0)))
    verdicts = [v for _, _, v in rows]
    return verdicts == data["verdicts"], f"{verdicts.count('outside')} outside"


_VERIFIERS = {
    "interpolab/separability-certificate@1": _verify_separability,
    "interpolab/nonseparability-verdict@1": _verify_nonseparability,
    "interpolab/interpolant@1": _verify_interpolant,
    "interpolab/two-step-witness@1": _verify_witness,
    "interpolab/partition-trace@1": _verify_partition,
    "interpolab/supmin@1": _verify_supmin,
    "interpolab/correlation-gap@1": _verify_gap,
    "interpolab/doubling-orbit@1": _verify_orbit,
}


def verify_artifact(data: dict) -> VerifyResult:
    schema = data.get("schema") if isinstance(data, dict) else None
    fn = _VERIFIERS.get(schema)
    if fn is None:
        raise ValueError(f"unknown or missing schema {schema!r}")
    try:
        ok, detail = fn(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        return VerifyResult(False, schema, f"malformed: {exc}")
    return VerifyResult(bool(ok), schema, detail)


def verify_path(path: str | os.PathLike) -> VerifyResult:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    return verify_artifact(data)

