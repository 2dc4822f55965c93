"""Command line interface.

Subcommands::

    pkirchhoff constants  --config run.json [--seed S] [--out DIR]
    pkirchhoff fiber      --config run.json [--field u.csv] [--out DIR]
    pkirchhoff solve      --config run.json [--seed S] [--tol T] [--out DIR]
    pkirchhoff sweep      --config run.json --axis a --values 0.1,0.2 [--jobs N]
    pkirchhoff thresholds --config run.json --sweep a=0.1,0.2

Exit codes: 0 success, 1 failure (including failed verification checks),
2 when the gates refuse the parameters.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import RunConfig, resolve_lambda
from .errors import GateRefusal, InvalidArgumentError
from .fibers import FiberProfile, fiber_deriv1, fiber_deriv2, fiber_value, h_map, nehari_roots
from .grid import field_from_csv, field_to_csv
from .kirchhoff import Variant
from .solver import prepare, solve
from .thresholds import check_gates, compute_thresholds, estimate_constants

EXIT_OK, EXIT_FAIL, EXIT_REFUSED = 0, 1, 2


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default)


def _emit(text, out_dir, name):
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, name), "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load(args):
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["options.seed"] = args.seed
    if getattr(args, "tol", None) is not None:
        overrides["options.residual_tol"] = args.tol
    cfg = RunConfig.load(args.config)
    return cfg.with_overrides(**overrides) if overrides else cfg


def _setup(cfg):
    """Build the problem, estimate constants and resolve ``lambda_rel``."""
    grid, params, model, opts = cfg.build()
    params.require_weight_conditions()
    est = estimate_constants(grid, params, seed=opts.seed)
    bundle = compute_thresholds(grid, params, est, C_star=cfg.C_star, theta=cfg.theta)
    params = resolve_lambda(cfg, grid, params, est, bundle)
    return grid, params, model, opts, est


def cmd_constants(args):
    cfg = _load(args)
    grid, params, _, opts, est = _setup(cfg)
    bundle = compute_thresholds(grid, params, est, C_star=cfg.C_star, theta=cfg.theta)
    gates = check_gates(params, bundle, est)
    out = {
        "seed": opts.seed,
        "lambda": params.lam,
        "estimates": est.to_dict(),
        "thresholds": bundle.to_dict(),
        "gates": gates.to_dict(),
    }
    _emit(_dumps(out), args.out, "constants.json")
    return EXIT_OK


def _fiber_table(grid, params, model, u, n_points=400):
    if not np.any(u):
        raise InvalidArgumentError("nonzero field required")
    prof = FiberProfile.from_field(grid, params, u)
    roots = nehari_roots(prof, model) if (prof.F > 0 or prof.G > 0) else []
    span = [t for t, _ in roots] or [1.0]
    lo, hi = math.log10(min(span)) - 2, math.log10(max(span)) + 2
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "h_a", "I", "I1", "I2"])
    for t in np.logspace(lo, hi, n_points):
        t = float(t)
        w.writerow([repr(t), repr(h_map(prof, model.a, model.b, t)),
                    repr(fiber_value(prof, model, t)), repr(fiber_deriv1(prof, model, t)),
                    repr(fiber_deriv2(prof, model, t))])
    summary = "; ".join(f"{t!r}:{c.branch.name}" for t, c in roots)
    w.writerow(["roots", str(len(roots)), summary, "", ""])
    return buf.getvalue(), roots


def cmd_fiber(args):
    cfg = _load(args)
    grid, params, model, opts, est = _setup(cfg)
    if args.field:
        with open(args.field) as fh:
            fgrid, u = field_from_csv(fh.read())
        if fgrid.n != grid.n:
            raise InvalidArgumentError("field and config grids differ")
    else:
        u = np.sin(np.pi * grid.nodes / grid.length)
    if model.variant is not Variant.PLAIN and model.a != params.a:
        raise InvalidArgumentError("model coefficients must match params")
    text, _ = _fiber_table(grid, params, model, u)
    _emit(text, args.out, "fiber.csv")
    return EXIT_OK


def cmd_solve(args):
    cfg = _load(args)
    grid, params, _, opts, est = _setup(cfg)
    try:
        result = solve(grid, params, opts, estimates=est, C_star=cfg.C_star, theta=cfg.theta)
    except GateRefusal as exc:
        report = {"refused": str(exc), "gates": exc.report.to_dict() if exc.report else None}
        _emit(_dumps(report), args.out, "refusal.json")
        return EXIT_REFUSED
    summary = result.to_dict()
    summary["seed"] = opts.seed
    summary["lambda"] = params.lam
    _emit(_dumps(summary), args.out, "report.json")
    if args.out:
        for name, rep in result.reports.items():
            _emit(field_to_csv(grid, rep.u), args.out, f"solution_{name}.csv")
            _emit(_dumps(rep.to_dict()), args.out, f"solution_{name}.json")
    return EXIT_OK if result.ok else EXIT_FAIL


_SWEEP_COLUMNS = ["axis", "value", "regime", "route", "lambda", "gates_passed", "n_solutions",
                  "energies", "norms", "residuals", "root_count", "S_q", "S_r", "Lambda", "ok", "error"]


def _sweep_row(cfg_dict, axis, value):
    row = dict.fromkeys(_SWEEP_COLUMNS, "")
    row.update(axis=axis, value=value)
    try:
        path = {"lambda": "params.lambda", "a": "params.a", "n": "grid.n"}[axis]
        cfg = RunConfig.from_dict(cfg_dict).with_overrides(**{path: int(value) if axis == "n" else value})
        grid, params, model, opts, est = _setup(cfg)
        est_, bundle, gates = prepare(grid, params, estimates=est, seed=opts.seed,
                                      C_star=cfg.C_star, theta=cfg.theta)
        u = np.sin(np.pi * grid.nodes / grid.length)
        try:
            roots = nehari_roots(FiberProfile.from_field(grid, params, u), params.plain_model())
            nroots = len(roots)
        except Exception:
            nroots = 0
        row.update(regime=gates.regime.value, route=gates.route or "", S_q=est.S_q,
                   S_r=est.S_r, Lambda=est.Lambda, root_count=nroots)
        row["lambda"] = params.lam
        row["gates_passed"] = gates.applicable is not None
        if gates.applicable is not None:
            res = solve(grid, params, opts, estimates=est, C_star=cfg.C_star, theta=cfg.theta)
            sols = list(res.reports.items())
            row["n_solutions"] = len(sols)
            row["energies"] = ";".join(f"{k}={r.energy!r}" for k, r in sols)
            row["norms"] = ";".join(f"{k}={r.norm!r}" for k, r in sols)
            row["residuals"] = ";".join(f"{k}={r.residual_norm!r}" for k, r in sols)
            row["ok"] = res.ok
        else:
            row["n_solutions"] = 0
    except Exception as exc:  # recorded in-row, the sweep continues
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _parse_values(text):
    text = (text or "").strip()
    return [float(v) for v in text.split(",") if v.strip()] if text else []


def cmd_sweep(args):
    cfg = _load(args)
    if args.axis not in ("lambda", "a", "n"):
        raise InvalidArgumentError("axis must be one of lambda, a, n")
    values = _parse_values(args.values)
    raw = cfg.to_dict()
    if args.jobs > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, [raw] * len(values), [args.axis] * len(values), values))
    else:
        rows = [_sweep_row(raw, args.axis, v) for v in values]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=_SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    _emit(buf.getvalue(), args.out, "sweep.csv")
    return EXIT_OK


def cmd_thresholds(args):
    cfg = _load(args)
    axis, _, text = (args.sweep or "a=").partition("=")
    if axis not in ("lambda", "a"):
        raise InvalidArgumentError("--sweep takes lambda=... or a=...")
    grid, params, _, opts, est = _setup(cfg)
    rows = []
    for v in _parse_values(text):
        pv = params.replace(**{"lam" if axis == "lambda" else "a": v})
        bundle = compute_thresholds(grid, pv, est, C_star=cfg.C_star, theta=cfg.theta)
        gates = check_gates(pv, bundle, est)
        rows.append({"axis": axis, "value": v, "route": gates.route or "", **bundle.to_dict()})
    fields = ["axis", "value", "route"] + list(compute_thresholds(grid, params, est).to_dict())
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    _emit(buf.getvalue(), args.out, "thresholds.csv")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="pkirchhoff", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True, tol=False):
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output directory (default: stdout)")
        if seed:
            p.add_argument("--seed", type=int, help="override options.seed")
        if tol:
            p.add_argument("--tol", type=float, help="override options.residual_tol")

    common(sub.add_parser("constants", help="estimate constants and thresholds"))
    p = sub.add_parser("fiber", help="tabulate the fiber map of a field")
    common(p)
    p.add_argument("--field", help="CSV field (x,value) including boundary zeros")
    common(sub.add_parser("solve", help="run the applicable existence pipeline"), tol=True)
    p = sub.add_parser("sweep", help="repeat solve along one parameter")
    common(p, tol=True)
    p.add_argument("--axis", required=True, choices=["lambda", "a", "n"])
    p.add_argument("--values", default="", help="comma-separated values")
    p.add_argument("--jobs", type=int, default=1)
    p = sub.add_parser("thresholds", help="threshold ladder without solving")
    common(p)
    p.add_argument("--sweep", help="axis=v1,v2,... with axis lambda or a")
    return ap


_COMMANDS = {
    "constants": cmd_constants,
    "fiber": cmd_fiber,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "thresholds": cmd_thresholds,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GateRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
