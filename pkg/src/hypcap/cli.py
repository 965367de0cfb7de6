"""Command-line front end: hypcap {compute, transform, verify, sweep}."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import verify as vf
from .capacity_fekete import CapacityEstimate, FeketeConfig, capacity_of
from .exceptions import ConfigurationError, DomainError
from .serialize import geodesic_from_dict, rows_to_table, set_from_dict, set_to_dict
from .set_model import DiameterSet, GridSet, Hedgehog
from .transforms import apply_transform

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_R_MAX = 0.95


class UsageError(Exception):
    pass


def _floats(text, name):
    if text is None or text.strip() == "":
        return []
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of numbers") from None


def _parse_json(text, where):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON in {where} at line {e.lineno} column {e.colno}: {e.msg}") from None


def _read_input(args, required=True):
    if args.inline is not None:
        return _parse_json(args.inline, "--inline")
    if args.input is not None:
        try:
            with open(args.input, encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.input}: {e.strerror}") from None
        return _parse_json(text, args.input)
    if required:
        raise UsageError("give a set with --input FILE or --inline JSON")
    return None


def _fekete_config(args, base: FeketeConfig):
    kw = base.to_dict()
    kw["seed"] = args.seed
    if args.n_sequence:
        kw["n_sequence"] = tuple(int(v) for v in _floats(args.n_sequence, "--n-sequence"))
    if args.restarts is not None:
        kw["restarts"] = args.restarts
    kw["n_sequence"] = tuple(kw["n_sequence"])
    return FeketeConfig(**kw)


def _rasterize(obj, spec):
    parts = _floats(spec, "--rasterize")
    if len(parts) not in (2, 3):
        raise UsageError("--rasterize takes n_r,n_theta[,r_max]")
    n_r, n_t = int(parts[0]), int(parts[1])
    r_max = parts[2] if len(parts) == 3 else DEFAULT_R_MAX
    if isinstance(obj, Hedgehog):
        return GridSet.from_hedgehog(obj, n_r, n_t, r_max)
    if isinstance(obj, DiameterSet):
        return GridSet.from_diameter_set(obj, n_r, n_t, r_max)
    if isinstance(obj, GridSet):
        return obj
    raise UsageError(f"cannot rasterize a {type(obj).__name__}")


def _emit(args, payload, table=None):
    if args.format == "csv":
        if table is None:
            raise UsageError("this subcommand has no CSV form; use --format json")
        text = table
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# subcommands

def cmd_compute(args):
    obj = set_from_dict(_read_input(args))
    cfg = _fekete_config(args, FeketeConfig())
    res = capacity_of(obj, cfg)
    payload = {"capacity": res.value, "provenance": res.provenance, "spread": res.spread,
               "seed": args.seed, "config": cfg.to_dict()}
    rows = []
    if isinstance(res.detail, CapacityEstimate):
        est = res.detail
        payload.update(n_sequence=list(est.n_sequence), cap_upper_bounds=list(est.cap_upper_bounds),
                       d_n=list(est.d_n), diagnostics=est.diagnostics, degenerate=est.degenerate)
        rows = [{"n": n, "value": c, "d_n": d, "provenance": "fekete_bound", "seed": args.seed}
                for n, c, d in zip(est.n_sequence, est.cap_upper_bounds, est.d_n)]
        if est.degenerate:
            payload["warning"] = "degenerate set: capacity 0"
            print("warning: degenerate set, capacity is 0", file=sys.stderr)
    else:
        payload.update(formula=res.detail.formula_id, parameters=res.detail.parameters)
    rows.append({"n": "limit", "value": res.value, "d_n": "", "provenance": res.provenance,
                 "seed": args.seed})
    _emit(args, payload, rows_to_table(rows, ("n", "value", "d_n", "provenance", "seed")))
    return EXIT_OK


def _transform_params(pairs):
    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        val = _parse_json(v, f"--param {k}")
        if k == "geodesic":
            val = geodesic_from_dict(val)
        elif k == "a" and isinstance(val, list):
            val = complex(*val)
        params[k] = val
    return params


def cmd_transform(args):
    obj = set_from_dict(_read_input(args))
    if args.rasterize:
        obj = _rasterize(obj, args.rasterize)
    params = _transform_params(args.param)
    if args.name in ("steiner", "polarize") and isinstance(obj, GridSet):
        params.setdefault("geodesic", geodesic_from_dict(None))
    try:
        out, report = apply_transform(args.name, obj, **params)
    except KeyError as e:
        raise UsageError(f"transform {args.name} needs --param {e.args[0]}=...") from None
    except ValueError as e:
        msg = str(e)
        if "rasterize" in msg or "grid set" in msg:
            msg += " (use --rasterize n_r,n_theta)"
        raise UsageError(msg) from None
    rep = report.to_dict()
    payload = {"set": set_to_dict(out), "report": rep, "seed": args.seed}
    rows = [{"quantity": k, "before": json.dumps(v["before"]), "after": json.dumps(v["after"]),
             "seed": args.seed} for k, v in rep["preserved"].items()]
    _emit(args, payload, rows_to_table(rows, ("quantity", "before", "after", "seed")))
    return EXIT_OK


def cmd_verify(args):
    if args.theorem_id not in vf.THEOREM_IDS:
        raise UsageError(f"unknown theorem id {args.theorem_id!r}; choose from {', '.join(vf.THEOREM_IDS)}")
    data = _read_input(args, required=False)
    grid = vf.default_grid(args.theorem_id)
    if data is not None:
        grid = data.get("grid") if isinstance(data, dict) else data
        if not isinstance(grid, list) or not all(isinstance(g, dict) for g in grid):
            raise UsageError("grid file must hold a list of parameter objects")
    m = args.tolerance if args.tolerance is not None else 1.0
    if not m > 0:
        raise UsageError("--tolerance must be positive")
    spec = vf.CheckSpec(args.theorem_id, grid, args.method, _fekete_config(args, vf.DESK_CONFIG),
                        vf.FF_FACTOR * m, vf.FC_FACTOR * m, invert=args.invert)
    rep = vf.run_check(spec)
    payload = rep.to_dict() | {"seed": args.seed}
    rows = [r | {"seed": args.seed} for r in rep.rows]
    _emit(args, payload, rows_to_table(rows, vf.CSV_COLUMNS + ("seed",)))
    return EXIT_FAIL if rep.verdict == "fail" else EXIT_OK


def cmd_sweep(args):
    if args.kind == "two-intervals":
        alphas = _floats(args.alphas, "--alphas")
        ts = _floats(args.t_values, "--t-values")
        if any(not 0 < a <= np.pi + 1e-12 for a in alphas):
            raise UsageError("angles must lie in (0, pi]")
        cfg = _fekete_config(args, vf.DESK_CONFIG)
        m = args.tolerance if args.tolerance is not None else 1.0
        rep = vf.sweep_two_intervals(alphas, ts, args.r, args.s, cfg, vf.FF_FACTOR * m) \
            if alphas and ts else vf.SweepReport([], {})
        rows = [r | {"seed": args.seed} for r in rep.rows]
        payload = rep.to_dict() | {"seed": args.seed, "config": cfg.to_dict()}
        _emit(args, payload, rows_to_table(rows, vf.SWEEP_COLUMNS + ("seed",)))
        return EXIT_FAIL if rep.verdict == "fail" else EXIT_OK
    rows = vf.sweep_constraint_curve(args.n, args.tau, args.num) if args.num > 0 else []
    rows = [r | {"seed": args.seed} for r in rows]
    cols = ("r1", "r2", "capacity", "provenance", "spread", "symmetric", "seed")
    _emit(args, {"rows": rows, "seed": args.seed}, rows_to_table(rows, cols))
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON file")
    common.add_argument("--inline", help="JSON text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--n-sequence", help="comma-separated point counts, e.g. 16,32,64")
    common.add_argument("--restarts", type=int)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), help="default csv for sweep, json otherwise")
    common.add_argument("--rasterize", help="n_r,n_theta[,r_max]: convert to a grid set first")
    common.add_argument("--tolerance", type=float, help="multiplier on the default tolerance factors")

    p = argparse.ArgumentParser(prog="hypcap", description="Conformal capacity in the hyperbolic disk.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="capacity of a set")
    t = sub.add_parser("transform", parents=[common], help="apply a set transform")
    t.add_argument("name", help="polarize, steiner, circular, szego, schwarz, radial or contract")
    t.add_argument("--param", action="append", metavar="KEY=JSON")
    v = sub.add_parser("verify", parents=[common], help="numerical check of an inequality")
    v.add_argument("theorem_id")
    v.add_argument("--method", choices=("fekete", "closed_form"), default="fekete")
    v.add_argument("--invert", action="store_true", help="flip every claim (harness self-test)")
    s = sub.add_parser("sweep", parents=[common], help="parameter sweeps")
    s.add_argument("kind", choices=("two-intervals", "constraint"))
    s.add_argument("--alphas", default="0.7853981633974483,1.5707963267948966,3.141592653589793")
    s.add_argument("--t-values", default="0,0.2,0.4,0.6")
    s.add_argument("--r", type=float, default=0.5)
    s.add_argument("--s", type=float, default=1.0)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--tau", type=float, default=1.0)
    s.add_argument("--num", type=int, default=100)
    return p


COMMANDS = {"compute": cmd_compute, "transform": cmd_transform, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "json"
    if args.input is not None and args.inline is not None:
        print("error: give only one of --input and --inline", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigurationError, DomainError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, TypeError) as e:
        print(f"error: missing or ill-typed field in input: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
