"""Command line front end.

Exit codes: 0 success (or CertifiedStein), 1 error, 2 RefutedStein,
3 Inconclusive.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .algebra import DomainError, group_element
from .bundles import BundlePoint, fiber_norm, membership
from .certify import (
    Status,
    certify_stein,
    delta_report,
    distinguished_curve,
    hyperbolicity_witness,
)
from .mostow import coords, decompose, radial, zeta_modulus
from .profiles import normalize
from .selftest import run_selftest
from .serialize import (
    SpecError,
    digest,
    emit,
    parse_complex,
    parse_matrix,
    parse_spec,
    point_from_dict,
    profile_to_json,
)

EXIT_OK, EXIT_ERROR, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2, 3
_STATUS_EXIT = {
    Status.CERTIFIED: EXIT_OK,
    Status.REFUTED: EXIT_REFUTED,
    Status.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class _Parser(argparse.ArgumentParser):
    # exit code 2 is reserved for RefutedStein
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _default_seed() -> int | None:
    env = os.environ.get("QBL_SEED")
    return int(env) if env else None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qbl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("--spec", required=True, help="spec JSON file")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="include wall time in the report")

    for name in ("decompose", "coords"):
        sp = sub.add_parser(name)
        sp.add_argument("--matrix", required=True, help="row-major 'a+bi,c+di;e+fi,g+hi'")
        common(sp, spec=False)

    sp = sub.add_parser("member")
    common(sp)
    sp.add_argument("--point", help="point JSON file")
    sp.add_argument("--matrix")
    sp.add_argument("--z", default="1")
    sp.add_argument("--punctured", action="store_true")

    sp = sub.add_parser("certify")
    common(sp)
    sp.add_argument("--seed", type=int, default=None)

    for name in ("delta", "curve"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("witness")
    common(sp)
    sp.add_argument("--z3", required=True)
    sp.add_argument("--z4", required=True)
    sp.add_argument("--eps", type=float, required=True)

    sp = sub.add_parser("selftest")
    common(sp, spec=False)
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--seed", type=int, default=None)
    return p


def _matrix_json(g) -> list:
    return [[complex(v) for v in row] for row in np.asarray(g)]


def _run(args) -> tuple[dict, int, tuple | None]:
    """Returns ``(outputs, exit_code, csv_columns)``."""
    cmd = args.command
    if cmd == "decompose":
        g = group_element(parse_matrix(args.matrix))
        f = decompose(g)
        return {
            "u": _matrix_json(f.u),
            "h": f.h,
            "zeta": f.zeta,
            "residual": float(np.linalg.norm(f.compose() - g)),
        }, EXIT_OK, None
    if cmd == "coords":
        c = coords(group_element(parse_matrix(args.matrix)))
        return {"s": c.s, "t": c.t, "zeta_modulus": zeta_modulus(c), "h": radial(c)}, EXIT_OK, None
    if cmd == "selftest":
        seed = args.seed if args.seed is not None else (_default_seed() or 0)
        results = run_selftest(args.samples, seed)
        ok = all(r["passed"] for r in results)
        return {"checks": results, "passed": ok}, EXIT_OK if ok else EXIT_ERROR, None

    spec = parse_spec(args.spec)
    rho = normalize(spec.profile)
    m = spec.m
    if cmd == "member":
        if args.point:
            with open(args.point, encoding="utf-8") as fh:
                p = point_from_dict(json.load(fh))
            if p.m != m:
                raise SpecError(f"point weight {p.m} differs from spec weight {m}")
        elif args.matrix:
            p = BundlePoint(parse_matrix(args.matrix), parse_complex(args.z), m)
        else:
            raise SpecError("member needs --point or --matrix")
        res = membership(p, rho, punctured=args.punctured)
        return {"membership": res.value, "norm": fiber_norm(p, rho)}, EXIT_OK, None
    if cmd == "certify":
        params = spec.certify
        seed = args.seed if args.seed is not None else _default_seed()
        if seed is not None:
            params = type(params)(**{**params.__dict__, "seed": seed})
        v = certify_stein(rho, m, params)
        out = {"status": v.status.value, "reason": v.reason, "worst_margin": v.worst_margin}
        extra = {k: val for k, val in v.violation.items() if k != "margin"}
        if extra:
            out["violation"] = extra
        return out, _STATUS_EXIT[v.status], None
    if cmd == "delta":
        mm = abs(m)
        if mm == 0:
            raise DomainError("delta is defined for m != 0")
        r = delta_report(rho, mm, spec.certify.tau_max, spec.certify.tau_steps)
        out = {
            "tau": r.tau_grid,
            "delta": r.delta_values,
            "monotone": r.monotone,
            "midpoint_convex": r.midpoint_convex,
            "divergent": r.divergent,
            "identically_zero": r.identically_zero,
        }
        return out, EXIT_OK, (("tau", "delta"), r.tau_grid, r.delta_values)
    if cmd == "curve":
        e = spec.extra
        x = np.linspace(e["curve_x_min"], e["curve_x_max"], int(e["curve_steps"]) + 1)
        r = distinguished_curve(rho, abs(m), x)
        out = {"x": r.x, "value": r.values, "convex": r.convex, "worst_margin": r.worst_margin}
        return out, EXIT_OK, (("x", "value"), r.x, r.values)
    if cmd == "witness":
        e = spec.extra
        w = hyperbolicity_witness(
            rho,
            abs(m),
            (parse_complex(args.z3), parse_complex(args.z4)),
            args.eps,
            tau_scan_max=e["tau_scan_max"],
            scan_steps=int(e["scan_steps"]),
            params=spec.certify,
        )
        return {
            "witness": {
                "C": w.C,
                "D": w.D,
                "s_bound": w.s_bound,
                "t_min": w.t_min,
                "t_max": w.t_max,
                "center": list(w.center),
                "eps": w.eps,
                "m": w.m,
            }
        }, EXIT_OK, None
    raise SpecError(f"unknown command {cmd!r}")


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        outputs, code, columns = _run(args)
        text = _render(args, outputs, columns, start)
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"qbl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.out is None:
        stdout.write(text)
    return code


def _render(args, outputs: dict, columns, start: float) -> str:
    if getattr(args, "format", "json") == "csv":
        return emit(columns[1:], "csv", args.out, header=columns[0])
    inputs = {k: v for k, v in vars(args).items() if k not in ("out", "timing")}
    if getattr(args, "spec", None):
        spec = parse_spec(args.spec)
        inputs["spec"] = {"m": spec.m, "profile": profile_to_json(spec.profile), "params": spec.raw.get("params", {})}
    if getattr(args, "point", None):
        with open(args.point, encoding="utf-8") as fh:
            inputs["point"] = json.load(fh)
    report = {"command": args.command, "inputs_digest": digest(inputs), "outputs": outputs}
    if args.timing:
        report["wall_time"] = time.perf_counter() - start
    return emit(report, "json", args.out)


def main() -> None:
    sys.exit(run())
