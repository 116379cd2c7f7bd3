"""Spec parsing and canonical report emission."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .algebra import DomainError, matrix2
from .bundles import BundlePoint
from .certify import CertifyParams
from .profiles import Constant, CoshPower, Grid, RhoProfile

_PROFILE_KEYS = {
    "cosh_power": {"kind", "alpha"},
    "constant": {"kind", "c"},
    "grid": {"kind", "h_max", "log_rho"},
}
_EXTRA_PARAMS = {
    "tau_scan_max": 400.0,
    "scan_steps": 4000,
    "curve_x_min": -10.0,
    "curve_x_max": 10.0,
    "curve_steps": 200,
}
_INT_PARAMS = {"h_steps", "tau_steps", "seed", "n_samples", "circle_points", "scan_steps", "curve_steps"}


class SpecError(DomainError):
    """Malformed spec or point file."""


@dataclass(frozen=True)
class SpecFile:
    m: int
    profile: RhoProfile
    certify: CertifyParams = CertifyParams()
    extra: dict = field(default_factory=lambda: dict(_EXTRA_PARAMS))
    raw: dict = field(default_factory=dict)


def profile_from_json(d) -> RhoProfile:
    if not isinstance(d, dict) or "kind" not in d:
        raise SpecError("profile must be an object with a 'kind'")
    kind = d["kind"]
    if kind not in _PROFILE_KEYS:
        raise SpecError(f"unknown profile kind {kind!r}")
    unknown = set(d) - _PROFILE_KEYS[kind]
    missing = _PROFILE_KEYS[kind] - set(d)
    if unknown:
        raise SpecError(f"unknown profile keys: {sorted(unknown)}")
    if missing:
        raise SpecError(f"missing profile field(s): {sorted(missing)}")
    try:
        if kind == "cosh_power":
            return CoshPower(float(d["alpha"]))
        if kind == "constant":
            return Constant(float(d["c"]))
        return Grid(float(d["h_max"]), tuple(float(v) for v in d["log_rho"]))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"invalid profile: {exc}") from exc


def profile_to_json(p: RhoProfile) -> dict:
    if isinstance(p, CoshPower):
        return {"kind": "cosh_power", "alpha": p.alpha}
    if isinstance(p, Constant):
        return {"kind": "constant", "c": p.c}
    return {"kind": "grid", "h_max": p.h_max, "log_rho": list(p.log_rho)}


def spec_from_dict(d) -> SpecFile:
    if not isinstance(d, dict):
        raise SpecError("spec must be a JSON object")
    unknown = set(d) - {"m", "profile", "params"}
    if unknown:
        raise SpecError(f"unknown spec keys: {sorted(unknown)}")
    for key in ("m", "profile"):
        if key not in d:
            raise SpecError(f"missing required field '{key}'")
    m = d["m"]
    if isinstance(m, bool) or not isinstance(m, int):
        raise SpecError("field 'm' must be an integer")
    profile = profile_from_json(d["profile"])

    params = dict(d.get("params", {}))
    known = {f.name for f in fields(CertifyParams)} | set(_EXTRA_PARAMS)
    unknown = set(params) - known
    if unknown:
        raise SpecError(f"unknown params: {sorted(unknown)}")
    for key, val in params.items():
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise SpecError(f"param '{key}' must be numeric")
        if key in _INT_PARAMS and not isinstance(val, int):
            raise SpecError(f"param '{key}' must be an integer")
        if key == "seed":
            if val < 0:
                raise SpecError("param 'seed' must be >= 0")
        elif key != "curve_x_min" and val <= 0:
            raise SpecError(f"param '{key}' must be positive")
    cert_keys = {f.name for f in fields(CertifyParams)}
    cert = CertifyParams(**{k: v for k, v in params.items() if k in cert_keys})
    extra = dict(_EXTRA_PARAMS)
    extra.update({k: v for k, v in params.items() if k in _EXTRA_PARAMS})
    return SpecFile(m, profile, cert, extra, d)


def parse_spec(path) -> SpecFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON in {path}: {exc}") from exc
    return spec_from_dict(d)


def _pair(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise SpecError(f"expected [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def point_from_dict(d) -> BundlePoint:
    """``{"g": [z1, z2, z3, z4], "z": [re, im], "m": int}``, entries column-major."""
    if not isinstance(d, dict) or set(d) != {"g", "z", "m"}:
        raise SpecError("point must have exactly the keys g, z, m")
    if not isinstance(d["g"], list) or len(d["g"]) != 4:
        raise SpecError("point 'g' must list 4 entries")
    g = matrix2(*(_pair(v) for v in d["g"]))
    return BundlePoint(g, _pair(d["z"]), int(d["m"]))


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise SpecError(f"cannot parse complex number {text!r}") from exc


def parse_matrix(text: str) -> np.ndarray:
    """Row-major ``"a+bi,c+di;e+fi,g+hi"``."""
    rows = text.split(";")
    if len(rows) != 2 or any(len(r.split(",")) != 2 for r in rows):
        raise SpecError(f"matrix must look like 'a,b;c,d', got {text!r}")
    return np.array([[parse_complex(v) for v in r.split(",")] for r in rows], dtype=complex)


# -- canonical output ----------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    # adding 0.0 folds -0.0 into 0.0
    return "%.17g" % (x + 0.0)


def canonical_json(obj) -> str:
    """Key-sorted JSON with 17-significant-digit floats; complex as ``[re, im]``."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return canonical_json([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return canonical_json(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k, ensure_ascii=False)}:{canonical_json(v)}" for k, v in items) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def csv_text(header: tuple[str, str], a, b) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for x, y in zip(np.asarray(a, dtype=float), np.asarray(b, dtype=float)):
        w.writerow([_fmt_float(x), _fmt_float(y)])
    return buf.getvalue()


def emit(report, fmt: str = "json", path=None, header: tuple[str, str] = ("tau", "delta")) -> str:
    """Render ``report`` and write it to ``path`` (stdout when ``None``).

    For ``csv`` the report must be a pair of equal-length columns.
    """
    if fmt == "json":
        text = canonical_json(report) + "\n"
    elif fmt == "csv":
        text = csv_text(header, *report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        try:
            Path(path).write_bytes(text.encode("utf-8"))
        except OSError as exc:
            raise DomainError(f"cannot write {path}: {exc}") from exc
    return text
