"""Command-line front end.

    cgclosure closure compute --body K.json [--mode exact|oracle] [--bound B] [--out R.json]
    cgclosure closure verify --result R.json --body K.json --bound B
    cgclosure kronecker approx --pi "[0,1]" --field 2 --eps 1/100 --n0 0
    cgclosure homogeneity lift --body K.json --face-normal "[1,0]" --cut '{"c": [0,1], "delta": "3/2"}'
    cgclosure plot --body K.json [--result R.json | --bound B] --out K.svg
    cgclosure corpus run --dir corpus [--out results/]

Exit codes: 0 success, 1 domain error (the error class is printed), 2 usage.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import closure as cl
from . import geometry as geo
from . import homogeneity as hom
from . import kronecker as kr
from .body import body_from_json
from .errors import DomainError
from .numeric import (DEFAULT_FIELD, rational_to_json, scalar_from_json, scalar_to_json, vector_from_json,
                      vector_to_json)
from .plot import plot2d

SCALAR = {"oneOf": [
    {"type": "integer"},
    {"type": "string"},
    {"type": "array", "items": {"type": ["integer", "string"]}, "minItems": 2, "maxItems": 2},
]}
VECTOR = {"type": "array", "items": SCALAR, "minItems": 1}
HALFSPACE = {"type": "object", "required": ["normal", "rhs"],
             "properties": {"normal": VECTOR, "rhs": SCALAR}}

BODY_SCHEMA = {
    "type": "object",
    "required": ["type"],
    "properties": {
        "type": {"enum": ["polytope", "ball", "ellipse"]},
        "field": {"type": "integer", "minimum": 2},
        "vertices": {"type": "array", "items": VECTOR, "minItems": 1},
        "inequalities": {"type": "array", "items": HALFSPACE},
        "equations": {"type": "array", "items": HALFSPACE},
        "center": VECTOR,
        "radius": SCALAR,
        "shape": {"type": "array", "items": VECTOR, "minItems": 2, "maxItems": 2},
    },
    "allOf": [
        {"if": {"properties": {"type": {"const": "polytope"}}},
         "then": {"anyOf": [{"required": ["vertices"]}, {"required": ["inequalities"]}]}},
        {"if": {"properties": {"type": {"const": "ball"}}},
         "then": {"required": ["center", "radius"]}},
        {"if": {"properties": {"type": {"const": "ellipse"}}},
         "then": {"required": ["center", "shape"]}},
    ],
}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["body"],
    "properties": {
        "name": {"type": "string"},
        "body": BODY_SCHEMA,
        "mode": {"enum": ["exact", "oracle"]},
        "bound": {"type": "integer", "minimum": 1},
        "expected": {
            "type": "object",
            "properties": {
                "empty": {"type": "boolean"},
                "vertices": {"type": "array", "items": VECTOR},
            },
        },
    },
}


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}")
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}")


def _validate(obj, schema, what):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as e:
        raise UsageError(f"{what} does not match the expected schema: {e.message}\n"
                         f"expected schema:\n{json.dumps(schema, indent=2)}")


def load_instance(path) -> dict:
    """A body file is either a bare body or an instance {"body": ..., "expected": ...}."""
    obj = _load_json(path)
    if isinstance(obj, dict) and "body" in obj:
        _validate(obj, INSTANCE_SCHEMA, str(path))
        return obj
    _validate(obj, BODY_SCHEMA, str(path))
    return {"body": obj}


def _parse_value(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        try:
            Fraction(text)
            return text
        except ValueError:
            raise UsageError(f"cannot parse {what}: {text!r}")


def _parse_vector(text: str, field: int, what: str):
    obj = _parse_value(text, what)
    if not isinstance(obj, list):
        raise UsageError(f"{what} must be a JSON list")
    return vector_from_json(obj, field)


def _parse_pi(text: str, field: int | None):
    """A vector over Q(sqrt m); with --field, a flat numeric pair [a, b] means the single entry a + b sqrt m."""
    obj = _parse_value(text, "--pi")
    if not isinstance(obj, list):
        raise UsageError("--pi must be a JSON list")
    m = field or DEFAULT_FIELD
    if field and len(obj) == 2 and all(isinstance(x, int) for x in obj):
        return (scalar_from_json(obj, m),)
    return vector_from_json(obj, m)


def _dump(obj, out):
    text = json.dumps(obj, separators=(",", ":"))
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _compute(inst: dict, mode: str, bound: int, stable: bool):
    K = body_from_json(inst["body"])
    if mode == "oracle":
        res = cl.brute_force_closure(K, bound, check_stable=stable)
        return K, res, res.to_json()
    res = cl.cg_closure(K)
    return K, res, res.to_json()


def cmd_closure_compute(args):
    inst = load_instance(args.body)
    mode = args.mode or inst.get("mode", "exact")
    bound = args.bound or inst.get("bound", 8)
    t = time.perf_counter()
    _, _, out = _compute(inst, mode, bound, not args.no_stability)
    out = {"mode": mode, **out}
    if args.timing:
        out["timing"] = {"seconds": round(time.perf_counter() - t, 6)}
    _dump(out, args.out)
    return 0


def cmd_closure_verify(args):
    inst = load_instance(args.body)
    K = body_from_json(inst["body"])
    obj = _load_json(args.result)
    if obj.get("mode", "exact") != "exact":
        raise UsageError("verify needs an exact result (closure compute --mode exact)")
    result = cl.ClosureResult.from_json(obj, K.polytope)
    t = time.perf_counter()
    report = cl.verify_closure(result, K, args.bound)
    out = report.to_json()
    if args.timing:
        out["timing"] = {"seconds": round(time.perf_counter() - t, 6)}
    _dump(out, args.out)
    if not report.passed:
        print("verification failed", file=sys.stderr)
        return 1
    return 0


def cmd_kronecker_approx(args):
    pi = _parse_pi(args.pi, args.field)
    eps = Fraction(args.eps)
    t = time.perf_counter()
    ap = kr.approximate(pi, eps, args.n0, args.max_iter)
    out = {"a": list(ap.a), "N": ap.N}
    if args.certificate:
        out["residual"] = vector_to_json(ap.residual)
        out["norm_sq"] = scalar_to_json(ap.norm_sq)
        out["eps_sq"] = rational_to_json(eps * eps)
    if args.timing:
        out["timing"] = {"seconds": round(time.perf_counter() - t, 6)}
    _dump(out, args.out)
    return 0


def cmd_homogeneity_lift(args):
    inst = load_instance(args.body)
    K = body_from_json(inst["body"])
    m = inst["body"].get("field", DEFAULT_FIELD)
    normal = _parse_vector(args.face_normal, m, "--face-normal")
    if args.cut:
        cut = _parse_value(args.cut, "--cut")
        if not isinstance(cut, dict) or "c" not in cut or "delta" not in cut:
            raise UsageError('--cut must look like {"c": [0, 1], "delta": "3/2"}')
        c_text, delta_obj = json.dumps(cut["c"]), cut["delta"]
    elif args.c is not None and args.delta is not None:
        c_text, delta_obj = args.c, _parse_value(args.delta, "--delta")
    else:
        raise UsageError("give --cut or both --c and --delta")
    c = tuple(int(x) for x in _parse_vector(c_text, m, "--c"))
    delta = scalar_from_json(delta_obj, m)
    face = geo.pi_face(K.polytope, normal)
    t = time.perf_counter()
    cert = hom.lift_cut(K, face, c, delta, args.max_families)
    out = cert.to_json()
    out["checks"] = cert.checks(K)
    if args.timing:
        out["timing"] = {"seconds": round(time.perf_counter() - t, 6)}
    _dump(out, args.out)
    return 0


def cmd_plot(args):
    inst = load_instance(args.body)
    K = body_from_json(inst["body"])
    if args.result:
        obj = _load_json(args.result)
        cuts = [cl.CGCut.from_json(x) for x in obj["cuts"]]
        c = obj["closure"]
        closure = (geo.Polytope.empty(K.n) if c.get("empty")
                   else geo.from_vertices([vector_from_json(v) for v in c["vertices"]], K.n))
    else:
        res = cl.brute_force_closure(K, args.bound or 1, check_stable=False)
        cuts, closure = res.cuts, res.polytope
    svg = plot2d(K, cuts, closure, title=inst.get("name"))
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


def _same_vertices(P: geo.Polytope, expected: dict, m: int) -> bool:
    if expected.get("empty"):
        return P.is_empty
    if P.is_empty:
        return False
    want = geo.from_vertices([vector_from_json(v, m) for v in expected["vertices"]], P.n)
    return P.same_as(want)


def run_instance(path: str, out_dir: str | None = None) -> dict:
    """One corpus instance: compute, compare with the expected block, optionally write the result."""
    try:
        inst = load_instance(path)
        mode, bound = inst.get("mode", "exact"), inst.get("bound", 8)
        t = time.perf_counter()
        K, res, out = _compute(inst, mode, bound, False)
        seconds = time.perf_counter() - t
        poly = res.closure if mode == "exact" else res.polytope
        exp = inst.get("expected")
        ok = None if exp is None else _same_vertices(poly, exp, inst["body"].get("field", DEFAULT_FIELD))
        if out_dir:
            Path(out_dir, Path(path).name).write_text(json.dumps({"mode": mode, **out}, separators=(",", ":")) + "\n")
        return {"instance": Path(path).stem, "mode": mode, "ok": ok, "seconds": round(seconds, 3)}
    except (DomainError, UsageError) as e:
        return {"instance": Path(path).stem, "ok": False, "error": type(e).__name__, "detail": str(e)}


def cmd_corpus_run(args):
    root = Path(args.dir)
    inst_dir = root / "instances" if (root / "instances").is_dir() else root
    if not inst_dir.is_dir():
        raise UsageError(f"no corpus directory: {root}")
    paths = sorted(str(p) for p in inst_dir.glob("*.json"))
    exp_dir = root / "expected"
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
    threads = max(1, int(os.environ.get("CG_THREADS", "1")))
    if threads > 1 and len(paths) > 1:
        with ProcessPoolExecutor(threads) as ex:
            rows = list(ex.map(run_instance, paths, [args.out] * len(paths)))
    else:
        rows = [run_instance(p, args.out) for p in paths]
    for p, row in zip(paths, rows):
        # expected/<name>.json overrides an inline expected block
        side = exp_dir / Path(p).name
        if row.get("error") is None and side.is_file():
            inst = load_instance(p)
            exp = _load_json(side)
            _, res, _ = _compute(inst, row["mode"], inst.get("bound", 8), False)
            poly = res.closure if row["mode"] == "exact" else res.polytope
            row["ok"] = _same_vertices(poly, exp, inst["body"].get("field", DEFAULT_FIELD))
        status = "PASS" if row["ok"] else ("----" if row["ok"] is None else "FAIL")
        extra = row.get("error", f'{row.get("seconds", 0)}s')
        print(f"{status} {row['instance']} {extra}")
    failed = [r for r in rows if r["ok"] is False]
    checked = [r for r in rows if r["ok"] is not None]
    note = f" ({len(rows) - len(checked)} without expectations)" if len(checked) < len(rows) else ""
    print(f"{len(checked) - len(failed)}/{len(checked)} instances passed{note}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgclosure", description="Exact Chvátal-Gomory closures.")
    sub = p.add_subparsers(dest="group", required=True)

    def timing(q):
        q.add_argument("--timing", action="store_true", help="add wall-clock seconds to the output")

    g = sub.add_parser("closure").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("compute")
    q.add_argument("--body", required=True)
    q.add_argument("--mode", choices=["exact", "oracle"])
    q.add_argument("--bound", type=int)
    q.add_argument("--no-stability", action="store_true", help="oracle mode: skip the 2B recomputation")
    q.add_argument("--out")
    timing(q)
    q.set_defaults(func=cmd_closure_compute)
    q = g.add_parser("verify")
    q.add_argument("--result", required=True)
    q.add_argument("--body", required=True)
    q.add_argument("--bound", type=int, default=8)
    q.add_argument("--out")
    timing(q)
    q.set_defaults(func=cmd_closure_verify)

    g = sub.add_parser("kronecker").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("approx")
    q.add_argument("--pi", required=True)
    q.add_argument("--field", type=int)
    q.add_argument("--eps", required=True)
    q.add_argument("--n0", type=int, default=0)
    q.add_argument("--max-iter", type=int, default=kr.DEFAULT_MAX_ITER)
    q.add_argument("--certificate", action="store_true", help="also print the exact residual and its squared norm")
    q.add_argument("--out")
    timing(q)
    q.set_defaults(func=cmd_kronecker_approx)

    g = sub.add_parser("homogeneity").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("lift")
    q.add_argument("--body", required=True)
    q.add_argument("--face-normal", required=True)
    q.add_argument("--cut", help='JSON {"c": [...], "delta": ...}')
    q.add_argument("--c")
    q.add_argument("--delta")
    q.add_argument("--max-families", type=int, default=hom.MAX_FAMILIES)
    q.add_argument("--out")
    timing(q)
    q.set_defaults(func=cmd_homogeneity_lift)

    q = sub.add_parser("plot")
    q.add_argument("--body", required=True)
    q.add_argument("--result")
    q.add_argument("--bound", type=int)
    q.add_argument("--out")
    q.set_defaults(func=cmd_plot)

    g = sub.add_parser("corpus").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("run")
    q.add_argument("--dir", required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_corpus_run)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DomainError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
