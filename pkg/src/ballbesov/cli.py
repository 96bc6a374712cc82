"""Command-line front end.

Exit codes: 0 success, 1 a gated check failed, 2 input error,
3 numerical precondition violated (divergent norm, short truncation,
unresolvable kernel).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from . import manifest as MF
from .norms import DivergenceError, besov_norm, default_norm_rule
from .operators import OperatorSpec, TruncationError, apply, apply_T_exact, apply_T_quad
from .quadrature import auto_sphere_rule, build_ball_rule, mc_sphere_rule
from .series import HoloSeries, evaluate
from .validation import HypothesisError, lemma4_csv, lemma4_table
from .weights import weight_from_dict

EXIT_OK, EXIT_GATE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _series(path: str) -> HoloSeries:
    try:
        return HoloSeries.from_dict(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _weight(path: str | None):
    if path is None:
        return weight_from_dict({"type": "power", "a": 0.0})
    try:
        return weight_from_dict(_read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _points(path: str, n: int) -> np.ndarray:
    data = _read_json(path)
    try:
        Z = MF.points(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if Z.shape[1] != n:
        raise InputError(f"{path}: points have {Z.shape[1]} coordinates, expected {n}")
    return Z


def _dump(obj, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cplx(values) -> list:
    return [[float(v.real), float(v.imag)] for v in np.atleast_1d(values)]


# ---------------------------------------------------------------------------

def cmd_norm(args) -> int:
    f = _series(args.series)
    omega = _weight(args.weight)
    rule = None
    if args.levels or args.points or args.sphere_n:
        kw = {"levels": args.levels or 20, "points": args.points or 10}
        sphere = (mc_sphere_rule(f.dim, args.sphere_n, args.seed) if args.sphere_n
                  else auto_sphere_rule(f.dim, f.partial_degrees()))
        try:
            rule = build_ball_rule(f.dim, args.p - f.dim - 1, omega, sphere=sphere, **kw)
        except ValueError as exc:
            raise DivergenceError(str(exc)) from exc
    res = besov_norm(f, args.p, omega, rule, method=args.method)
    out = res.to_dict()
    out["seed"] = args.seed
    _dump(out, args.out)
    return EXIT_OK


def cmd_apply(args) -> int:
    data = _read_json(args.spec)
    try:
        spec = OperatorSpec.from_dict(data, base_dir=os.path.dirname(os.path.abspath(args.spec)))
    except (KeyError, ValueError, TypeError, OSError) as exc:
        if isinstance(exc, TruncationError):
            raise
        raise InputError(f"{args.spec}: {exc}") from exc
    f = _series(args.series)
    out = {"seed": args.seed, "op": spec.to_dict(), "mode": args.mode}
    if args.mode == "exact":
        g = apply(spec, f)
        out["result"] = g.to_dict()
        if args.points:
            Z = _points(args.points, f.dim)
            out["values"] = _cplx(evaluate(g, Z))
    else:
        if spec.kind != "T":
            raise InputError("quad mode applies to the integral operator T only")
        if not args.points:
            raise InputError("quad mode needs --points")
        Z = _points(args.points, f.dim)
        try:
            vals = apply_T_quad(spec, f, Z, tol=args.tol or 1e-11)
        except FloatingPointError as exc:
            raise DivergenceError(str(exc)) from exc
        out["values"] = _cplx(vals)
        if args.verify:
            exact = evaluate(apply_T_exact(spec, f), Z)
            out["max_deviation"] = float(np.max(np.abs(exact - vals), initial=0.0))
    _dump(out, args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    manifest = MF.load_manifest(args.manifest)
    reports = MF.run_manifest(manifest, args.check, args.seed)
    summ = MF.summary(reports)
    summ["seed"] = int(manifest.get("seed", 0)) if args.seed is None else args.seed
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for r in reports:
            stem = "".join(c if c.isalnum() or c in "-_=." else "_" for c in r.inputs["name"])
            _atomic_write(os.path.join(args.out, stem + ".json"), r.to_json())
            _atomic_write(os.path.join(args.out, stem + ".txt"), r.to_text())
        _atomic_write(os.path.join(args.out, "summary.json"), json.dumps(summ, sort_keys=True, indent=1) + "\n")
    sys.stdout.write(MF.summary_text(summ))
    return EXIT_GATE if summ["gated_failures"] else EXIT_OK


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def cmd_sweep(args) -> int:
    grid = _read_json(args.grid)
    try:
        alpha, beta = float(grid["alpha"]), float(grid["beta"])
        omega = weight_from_dict(grid["weight"])
        radii = [float(r) for r in grid.get("radii", [])]
        n = int(grid.get("n", 1))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{args.grid}: {exc}") from exc
    if any(not 0 <= r < 1 for r in radii):
        raise InputError("radii must lie in [0, 1)")
    if not grid.get("exploratory", False):
        from .weights import check_hypotheses
        hyp = check_hypotheses(omega, alpha, beta)
        if not (hyp["alpha_condition"] and hyp["beta_condition"]):
            raise HypothesisError(f"hypotheses violated: {hyp}; set \"exploratory\": true to sweep anyway")
    text = lemma4_csv(lemma4_table(alpha, beta, omega, n, radii))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for randomized rules (recorded in output)")
    common.add_argument("--out", help="output file (or directory for validate)")

    parser = argparse.ArgumentParser(prog="ballbesov", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="weighted Besov norm of a series")
    p.add_argument("series")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--weight", help="weight JSON file (default: omega = 1)")
    p.add_argument("--method", choices=["auto", "exact", "quadrature"], default="auto")
    p.add_argument("--levels", type=int, help="radial grading levels")
    p.add_argument("--points", type=int, help="Gauss points per radial panel")
    p.add_argument("--sphere-n", type=int, help="use a Monte Carlo sphere rule with this many nodes")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("apply", parents=[common], help="apply T or M to a series")
    p.add_argument("spec", help="operator spec JSON")
    p.add_argument("series")
    p.add_argument("--mode", choices=["exact", "quad"], default="exact")
    p.add_argument("--points", dest="points", help="evaluation points JSON ([[re, im], ...] per point)")
    p.add_argument("--tol", type=float, help="kernel aliasing tolerance for quad mode")
    p.add_argument("--verify", action="store_true", help="also report the deviation from the exact path")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("validate", parents=[common], help="run checks from a manifest")
    p.add_argument("check", help="check id, entry name, or 'all'")
    p.add_argument("--manifest", help="manifest JSON (default: the shipped manifest)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", parents=[common], help="kernel-estimate ratio sweep as CSV")
    p.add_argument("grid", help="grid JSON: alpha, beta, weight, n, radii, exploratory")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command != "validate" and args.seed is None:
        args.seed = 0
    try:
        return args.func(args)
    except (InputError, MF.ManifestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DivergenceError, TruncationError, HypothesisError) as exc:
        print(f"numerical precondition: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # remaining ValueErrors come from inputs the parsers accepted but the
        # numerics reject (e.g. |z| too close to the sphere for quad mode)
        print(f"numerical precondition: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
