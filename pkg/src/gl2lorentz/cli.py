"""Command-line front end.

    gl2lorentz tables --format json
    gl2lorentz classify 1,1,-1,1
    gl2lorentz geodesic --u e1 --t1 3.14
    gl2lorentz transport --x e1+e2 --y e3
    gl2lorentz jacobi --velocity 1,1,0,0 --y0 0,0,0,0 --yp0 1,0,0,0
    gl2lorentz dev 0 1 0 1
    gl2lorentz cover-mul --p 0.3,2,0.1,1 --q 1.2,1,0,3
    gl2lorentz verify

Exit codes: 0 success, 2 input error, 3 computation error (or a failed
verification check).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import affine, dynamics, tables, verify
from .algebra import (
    AlgebraVector,
    CausalType,
    GroupPoint,
    as_vector,
    classify,
    in_timecone_e1,
    k_form,
    quadratic_form,
)
from .errors import GeometryError, InputError

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE = 0, 2, 3

_TERM = re.compile(r"\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*e([1-4])\s*")


# ------------------------------------------------------------------ parsing


def _parse_symbols(text: str) -> np.ndarray | None:
    """Linear combinations of e1..e4 such as "e1", "-2e3", "0.5*e2+e4"."""
    pos, coeffs = 0, np.zeros(4)
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            return None
        sign = -1.0 if m.group(1) == "-" else 1.0
        coeffs[int(m.group(3)) - 1] += sign * float(m.group(2) or 1.0)
        pos = m.end()
    return coeffs if text else None


def _parse_floats(text: str, n: int) -> np.ndarray:
    try:
        vals = np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise InputError(f"cannot parse {text!r} as numbers") from exc
    if vals.size != n or not np.all(np.isfinite(vals)):
        raise InputError(f"expected {n} finite comma-separated numbers, got {text!r}")
    return vals


def parse_matrix(text: str) -> AlgebraVector:
    """Row-major entries "a,b,c,d" or a combination of basis symbols."""
    sym = _parse_symbols(text)
    if sym is not None:
        return AlgebraVector(sym)
    return AlgebraVector.from_matrix(_parse_floats(text, 4).reshape(2, 2))


def parse_coefficients(text: str) -> AlgebraVector:
    """Basis coefficients "x1,x2,x3,x4" or a combination of basis symbols."""
    sym = _parse_symbols(text)
    if sym is not None:
        return AlgebraVector(sym)
    return AlgebraVector(_parse_floats(text, 4))


def parse_cover_point(text: str) -> affine.CoverPoint:
    """"t,T11,T12,T22"."""
    t, a, b, c = _parse_floats(text, 4)
    return affine.CoverPoint(t, np.array([[a, b], [b, c]]))


# --------------------------------------------------------------- commands


def _vec(u: AlgebraVector) -> dict:
    return {"coefficients": u.coeffs, "entries": list(u.entries)}


def cmd_tables(args) -> tuple[dict, list[str]]:
    t = tables.build_tables()
    results = {"values": t, "exact": tables.exact_strings(t)}
    warnings = [
        "weyl: printed case table; the tensor recomputed from the curvature (weyl_computed) vanishes identically",
        "curvature_operator_K0_13: recomputed value; the printed matrix has entries -+5/2",
    ]
    return results, warnings


def cmd_classify(args):
    u = parse_matrix(args.matrix)
    ct = classify(u, args.tol)
    cone = in_timecone_e1(u, args.tol)
    return {
        "vector": _vec(u),
        "q": quadratic_form(u),
        "k_uu": k_form(u, u),
        "causal_type": ct.value,
        "timecone": cone.value,
    }, []


def cmd_geodesic(args):
    u = parse_matrix(args.u)
    sample = dynamics.geodesic_samples(u, args.t1, args.steps)
    return {
        "velocity": _vec(u),
        "causal_type": classify(u, args.tol).value,
        "times": sample.times,
        "points": sample.states,
    }, []


def cmd_transport(args):
    x, y = parse_coefficients(args.x), parse_coefficients(args.y)
    spec = dynamics.GeodesicSpec(GroupPoint.identity(), x)
    tr = dynamics.parallel_transport(spec, y, args.t1, args.steps)
    g = np.diag([-1.0, 1, 1, 1])
    kyy = np.einsum("ni,ij,nj->n", tr.states, g, tr.states)
    kxy = tr.states @ g @ x.coeffs
    return {
        "x": x.coeffs,
        "times": tr.times,
        "reflection": tr.states,
        "max_drift_k_yy": float(np.max(np.abs(kyy - kyy[0]))),
        "max_drift_k_xy": float(np.max(np.abs(kxy - kxy[0]))),
    }, []


def cmd_jacobi(args):
    vel = parse_coefficients(args.velocity).coeffs
    y0 = parse_coefficients(args.y0).coeffs
    yp0 = parse_coefficients(args.yp0).coeffs
    cf = dynamics.jacobi_closed_form(vel, y0, yp0)
    num = dynamics.jacobi_integrate(vel, y0, yp0, args.t1, args.steps)
    closed = cf.evaluate(num.times)
    return {
        "branch": cf.branch.value,
        "alpha": {"re": cf.alpha.real, "im": cf.alpha.imag},
        "times": num.times,
        "closed_form": closed,
        "integrated": num.states,
        "sup_gap": float(np.max(np.abs(closed - num.states))),
    }, []


def cmd_dev(args):
    y = affine.CoverCoords(np.array(args.y, dtype=float))
    v = affine.developing_map(y)
    return {"y": y.y, "dev": v, "in_image": affine.dev_image_contains(v)}, []


def cmd_cover_mul(args):
    p, q = parse_cover_point(args.p), parse_cover_point(args.q)
    pq = affine.cover_multiply(p, q)
    alt = affine.cover_multiply_sqrt(p, q)
    proj = affine.cover_project(p).matrix @ affine.cover_project(q).matrix
    return {
        "product": {"t": pq.t, "T": pq.T},
        "product_sqrt_formula": {"t": alt.t, "T": alt.T},
        "projection": affine.cover_project(pq).matrix,
        "homomorphism_gap": float(np.max(np.abs(affine.cover_project(pq).matrix - proj))),
    }, []


def cmd_verify(args):
    checks = verify.run_all()
    counts = {s: sum(c.status == s for c in checks) for s in ("PASS", "FAIL", "WARN", "INFO")}
    warnings = [f"{c.name}: {c.detail}" for c in checks if c.status == "WARN"]
    return {"checks": [c.as_dict() for c in checks], "counts": counts}, warnings


COMMANDS = {
    "tables": cmd_tables,
    "classify": cmd_classify,
    "geodesic": cmd_geodesic,
    "transport": cmd_transport,
    "jacobi": cmd_jacobi,
    "dev": cmd_dev,
    "cover-mul": cmd_cover_mul,
    "verify": cmd_verify,
}


# -------------------------------------------------------------- rendering


def _plain(x):
    """numpy -> builtin types; non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return 0.0 if x == 0.0 else x
    return x


def _flatten(x, prefix=""):
    if isinstance(x, dict):
        for k in sorted(x):
            yield from _flatten(x[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(x, list):
        for i, v in enumerate(x):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, x


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    cmd, results = doc["command"], doc["results"]
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if cmd == "tables":
            w.writerow(["table", "key", "value", "exact"])
            for row in tables.table_rows(results["values"]):
                w.writerow(row)
        elif cmd == "verify":
            w.writerow(["name", "status", "tolerance", "observed", "detail"])
            for c in results["checks"]:
                w.writerow([c["name"], c["status"], c["tolerance"], c["observed"], c["detail"]])
        else:
            w.writerow(["field", "value"])
            for k, v in _flatten(results):
                w.writerow([k, v])
        return buf.getvalue()
    # text
    if cmd == "verify":
        for c in results["checks"]:
            tol = "" if c["tolerance"] is None else f" (tol {c['tolerance']:g})"
            obs = "" if c["observed"] is None else f" observed {c['observed']:.3e}"
            buf.write(f"{c['status']:4} {c['name']}{obs}{tol}")
            buf.write(f"  {c['detail']}\n" if c["detail"] else "\n")
        buf.write(" ".join(f"{k}={v}" for k, v in results["counts"].items()) + "\n")
    elif cmd == "tables":
        for name, key, val, exact in tables.table_rows(results["values"]):
            buf.write(f"{name} {key} = {val!r} ({exact})\n")
    else:
        for k, v in _flatten(results):
            buf.write(f"{k} = {v}\n")
    for w_ in doc["warnings"]:
        buf.write(f"warning: {w_}\n")
    return buf.getvalue()


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--steps", type=int, default=1000)
    common.add_argument("--t1", type=float, default=1.0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="gl2lorentz", description="Lorentzian and flat affine geometry of GL(2,R)_0")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("tables", parents=[common], help="closed-form tables")
    p = sub.add_parser("classify", parents=[common], help="causal type of a matrix")
    p.add_argument("matrix", help='"a,b,c,d" row-major or symbols like "e1", "-2e3+e4"')
    p = sub.add_parser("geodesic", parents=[common], help="samples of exp(s u)")
    p.add_argument("--u", required=True)
    p = sub.add_parser("transport", parents=[common], help="parallel transport along exp(t x)")
    p.add_argument("--x", required=True, help="basis coefficients or symbols")
    p.add_argument("--y", required=True, help="basis coefficients or symbols")
    p = sub.add_parser("jacobi", parents=[common], help="Jacobi field: closed form vs RK4")
    p.add_argument("--velocity", required=True, help="basis coefficients (a,b,c,d)")
    p.add_argument("--y0", default="0,0,0,0")
    p.add_argument("--yp0", default="1,0,0,0")
    p = sub.add_parser("dev", parents=[common], help="developing map")
    p.add_argument("y", nargs=4, type=float, metavar="Y")
    p = sub.add_parser("cover-mul", parents=[common], help="product in the universal cover")
    p.add_argument("--p", required=True, help='"t,T11,T12,T22"')
    p.add_argument("--q", required=True, help='"t,T11,T12,T22"')
    sub.add_parser("verify", parents=[common], help="run the self-check suite")
    return ap


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.steps < 1 or not args.tol > 0:
        print("error: --steps must be >= 1 and --tol > 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        results, warnings = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GeometryError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    doc = _plain({"command": args.command, "config": _config(args), "results": results, "warnings": warnings})
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify":
        return verify.exit_code(verify.Check(**c) for c in results["checks"])
    return EXIT_OK
