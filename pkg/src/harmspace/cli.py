"""Command-line front end for the toolkit.

One invocation resolves one run configuration and produces one JSON
summary plus zero or more CSV traces in the output directory.  A JSON
config file supplies defaults that explicit flags override; unknown
config keys are rejected.  Every command honors --dry-run, which prints
the resolved configuration and writes nothing.

Exit codes: 0 success, 1 verification check failure, 2 usage error.
The default output directory comes from $HARMSPACE_OUT, else the
working directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import ball as bl
from . import carleson as ca
from . import norms as no
from . import util, verify
from .fields import BergmanField, PoissonField, PowerField, TestField
from .geometry import Region, cubes_to_json, weighted_measure, whitney_cubes
from .quadrature import QuadSpec


class UsageError(Exception):
    """Bad invocation: maps to exit code 2."""


def _axis_point(n, height):
    return np.array([0.0] * n + [float(height)])


def _floats_csv(text):
    try:
        return tuple(float(v) for v in str(text).split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated floats, got {text!r}")


def _region_from(args):
    try:
        return Region(args.x_max, args.t_min, args.t_max)
    except ValueError as e:
        raise UsageError(str(e))


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}")


def _load_expansion(path):
    try:
        return bl.Expansion.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{path} is not a valid expansion file: {e}")


# ----------------------------------------------------------- run config


def _resolved_config(args, extra=None):
    skip = {"command", "config", "dry_run", "func"}
    out = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    out["command"] = args.command
    if extra:
        out.update(extra)
    return out


def _apply_config_file(args, raw_argv):
    """Merge the JSON config under explicitly passed flags."""
    if not args.config:
        return
    cfg = _load_json(args.config)
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    legal = set(vars(args)) - {"command", "config", "dry_run", "func"}
    unknown = set(cfg) - legal
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    for key, value in cfg.items():
        flag = "--" + key.replace("_", "-")
        if flag in raw_argv:
            continue  # explicit flag wins
        if key == "ids" and getattr(args, "ids", None):
            continue  # positional ids win
        if key == "overrides":
            if not isinstance(value, dict):
                raise UsageError("config key 'overrides' must be an object")
            merged = dict(value)
            merged.update(args.overrides or {})
            args.overrides = merged
            continue
        setattr(args, key, value)


def _parse_override_tokens(extras):
    """Leftover `--key value` (or `--key=value`) pairs as a dict."""
    out = {}
    toks = list(extras)
    while toks:
        tok = toks.pop(0)
        if not tok.startswith("--") or tok == "--":
            raise UsageError(f"unrecognized argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, val = key.split("=", 1)
        elif toks and not toks[0].startswith("--"):
            val = toks.pop(0)
        else:
            raise UsageError(f"missing value for {tok}")
        out[key.replace("-", "_")] = val
    return out


def _emit(args, summary, traces=()):
    """Write the one JSON summary plus CSV traces; return their paths."""
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    summary = dict(summary)
    summary["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    spath = os.path.join(outdir, f"{args.command}-summary.json")
    util.dump_json(summary, spath)
    paths = [spath]
    for name, header, rows in traces:
        cpath = os.path.join(outdir, f"{name}.csv")
        util.dump_csv(cpath, header, rows)
        paths.append(cpath)
    return paths


def _dry_run(args, extra=None):
    print(util.dumps_json(_resolved_config(args, extra)))
    return 0


# ------------------------------------------------------------ verify


def _cmd_verify(args, extras):
    cli_over = _parse_override_tokens(extras)
    if cli_over:
        args.overrides = {**(args.overrides or {}), **cli_over}
    ids = list(args.ids) or ["all"]
    known = set(verify.experiment_ids())
    bad = [i for i in ids if i != "all" and i not in known]
    if bad:
        raise UsageError(f"unknown experiment ids: {bad}")
    if args.overrides:
        if len(ids) != 1 or ids[0] == "all":
            raise UsageError("parameter overrides need exactly one experiment id")
        legal = set(verify.EXPERIMENTS[ids[0]].defaults)
        bad_keys = set(args.overrides) - legal
        if bad_keys:
            raise UsageError(
                f"unknown parameters for {ids[0]}: {sorted(bad_keys)}"
                f" (accepts {sorted(legal)})")
    if args.dry_run:
        return _dry_run(args, {"ids": ids})

    try:
        summary = verify.run_suite(ids, budget=args.budget, seed=args.seed,
                                   threads=args.threads,
                                   overrides=args.overrides)
    except ValueError as e:
        raise UsageError(str(e))
    summary["command"] = "verify"
    summary["ids"] = ids
    summary["overrides"] = args.overrides or {}
    traces = []
    for rep in summary["reports"]:
        for name, art in rep["artifacts"].items():
            if isinstance(art, dict) and "header" in art and "rows" in art:
                traces.append((f"{rep['id']}-{name}", art["header"], art["rows"]))
    paths = _emit(args, summary, traces)
    for rep in summary["reports"]:
        print(f"{rep['id']}: {rep['verdict']}")
    print(f"suite: {summary['verdict']} "
          f"({summary['n_pass']} pass, {summary['n_fail']} fail)")
    print(f"wrote {paths[0]}")
    return 0 if summary["verdict"] == "pass" else 1


# -------------------------------------------------------------- norm


_HALF_SPACES = ("slice", "bergman", "mixed", "tl", "sup")
_BALL_SPACES = ("slice", "volume", "mixed", "sup", "hardy")


def _parse_field(spec, n):
    """Builtin families: poisson, bergman-q, test-fn, power, expansion-file."""
    name, _, rest = str(spec).partition(":")
    parts = rest.split(":") if rest else []
    try:
        if name == "poisson":
            height = float(parts[0]) if parts else 1.0
            return PoissonField(n, _axis_point(n, height))
        if name == "bergman-q":
            if not parts:
                raise UsageError("bergman-q needs an order, e.g. bergman-q:2")
            height = float(parts[1]) if len(parts) > 1 else 1.0
            return BergmanField(int(parts[0]), n, _axis_point(n, height))
        if name == "test-fn":
            if not parts:
                raise UsageError("test-fn needs an order, e.g. test-fn:1")
            height = float(parts[1]) if len(parts) > 1 else 1.0
            return TestField(int(parts[0]), n, _axis_point(n, height))
        if name == "power":
            if not parts:
                raise UsageError("power needs an exponent, e.g. power:1.5")
            return PowerField(n, float(parts[0]))
        if name == "expansion-file":
            if not parts:
                raise UsageError("expansion-file needs a path")
            return _load_expansion(":".join(parts))
    except (TypeError, ValueError) as e:
        raise UsageError(f"malformed field spec {spec!r}: {e}")
    raise UsageError(
        f"unknown field family {name!r} (poisson, bergman-q, test-fn,"
        f" power, expansion-file)")


def _cmd_norm(args, extras):
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    if args.dry_run:
        return _dry_run(args)
    f = _parse_field(args.field, args.n)
    try:
        if isinstance(f, bl.Expansion):
            if args.space not in _BALL_SPACES:
                raise UsageError(
                    f"space {args.space!r} undefined on the ball"
                    f" (use one of {_BALL_SPACES})")
            res, rad = args.resolution, args.radial
            if args.space == "slice":
                value = bl.slice_norm_ball(f, args.q, args.t, resolution=res)
            elif args.space == "volume":
                value = bl.volume_norm(f, args.p, args.alpha, res, rad)
            elif args.space == "mixed":
                value = bl.mixed_norm_ball(f, args.p, args.q, args.alpha, res, rad)
            elif args.space == "sup":
                value = bl.sup_mixed_norm_ball(f, args.q, args.alpha, res)
            else:
                value = bl.hardy_norm(f, args.t, resolution=res)
        else:
            if args.space not in _HALF_SPACES:
                raise UsageError(
                    f"space {args.space!r} undefined on the half-space"
                    f" (use one of {_HALF_SPACES})")
            region = _region_from(args)
            spec = QuadSpec(order=args.order, t_order=args.t_order)
            if args.space == "slice":
                value = no.slice_norm(f, args.q, args.t, region, spec)
            elif args.space == "bergman":
                value = no.bergman_norm(f, args.p, args.alpha, region, spec)
            elif args.space == "mixed":
                value = no.mixed_norm(f, args.p, args.q, args.alpha, region, spec)
            elif args.space == "tl":
                value = no.triebel_norm(f, args.p, args.q, args.alpha, region, spec)
            else:
                value = no.sup_norm(f, args.lam, region)[0]
    except ValueError as e:
        raise UsageError(str(e))
    summary = _resolved_config(args)
    summary["value"] = value
    header = ["space", "field", "n", "p", "q", "alpha", "lam", "t", "value"]
    row = [args.space, args.field, args.n, args.p, args.q, args.alpha,
           args.lam, args.t, value]
    paths = _emit(args, summary, [("norm-trace", header, [row])])
    print(repr(value))
    print(f"wrote {paths[0]}")
    return 0


# ------------------------------------------------------------ carleson


def _cmd_carleson(args, extras):
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    if args.dry_run:
        return _dry_run(args)
    try:
        mu = ca.AtomicMeasure.from_json(_load_json(args.measure))
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError(f"{args.measure} is not a valid measure file: {e}")
    region = _region_from(args)
    cubes = whitney_cubes(region, mu.n)
    try:
        if args.condition == "vector":
            s_vec = _floats_csv(args.s)
            rep = ca.condition_vector(mu, cubes, len(s_vec), s_vec)
        elif args.condition == "single":
            rep = ca.condition_single(mu, cubes, args.alpha)
        elif args.condition == "mixed":
            rep = ca.condition_mixed(mu, cubes, args.p, args.q, args.alpha)
        else:
            rep = ca.condition_tent(mu, cubes, args.p, args.alpha, args.tau)
    except ValueError as e:
        raise UsageError(str(e))
    summary = _resolved_config(args)
    summary.update(rep.summary())
    summary["level_maxima"] = {str(k): v for k, v in rep.level_maxima().items()}
    header = ["condition", "level", "index", "mass", "gauge", "ratio"]
    paths = _emit(args, summary, [("carleson-trace", header, rep.csv_rows())])
    print(f"constant={rep.constant!r} over {len(rep.rows)} boxes")
    print(f"wrote {paths[0]}")
    return 0


# ---------------------------------------------------------------- ball


def _parse_symbol(spec, cap):
    """decay:E -> (1+k)^-E, growth:E -> (1+k)^E, identity, zero, file:PATH."""
    name, _, rest = str(spec).partition(":")
    k = np.arange(cap + 1.0)
    try:
        if name == "decay":
            return bl.Multiplier.diagonal(2, cap, (1.0 + k) ** -float(rest))
        if name == "growth":
            return bl.Multiplier.diagonal(2, cap, (1.0 + k) ** float(rest))
        if name == "identity":
            return bl.Multiplier.diagonal(2, cap, np.ones(cap + 1))
        if name == "zero":
            return bl.Multiplier.diagonal(2, cap, np.zeros(cap + 1))
        if name == "file":
            vals = _load_json(rest)
            return bl.Multiplier.diagonal(2, cap, np.asarray(vals, dtype=complex))
    except (TypeError, ValueError) as e:
        raise UsageError(f"malformed symbol spec {spec!r}: {e}")
    raise UsageError(
        f"unknown symbol family {name!r} (decay, growth, identity, zero, file)")


def _expansion_trace(name, f):
    rows = [[k, float(np.max(np.abs(c)))] for k, c in enumerate(f.coeffs)]
    return (name, ["degree", "max_abs_coeff"], rows)


def _cmd_ball(args, extras):
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    if args.dry_run:
        return _dry_run(args)
    summary = _resolved_config(args)
    traces = []

    if args.operation == "multiplier-check":
        c = _parse_symbol(args.symbol, args.cap)
        if args.s <= 1.0:
            raise UsageError("need s > 1 for the dual exponent")
        res = args.resolution or 4 * args.cap + 8
        pts, w = bl.sphere_grid(2, res)
        sup, slope, rows = verify.slice_functional(
            c, args.s / (args.s - 1.0), args.beta, args.lam_order,
            args.rho_levels, pts, w)
        kind = ("finite" if slope > -0.05 else
                "divergent" if slope <= -0.2 else "inconclusive")
        summary.update(functional=sup, trend=slope, classification=kind)
        traces.append(("ball-multiplier-trace", ["rho", "value"], rows))
        print(f"functional={sup!r} trend={slope:+.4f} -> {kind}")
    elif args.operation == "functional":
        f = _load_expansion(args.expansion)
        res, rad = args.resolution or 24, args.radial
        try:
            if args.kind == "volume":
                value = bl.volume_norm(f, args.p, args.alpha, res, rad)
            elif args.kind == "mixed":
                value = bl.mixed_norm_ball(f, args.p, args.q, args.alpha, res, rad)
            elif args.kind == "sup":
                value = bl.sup_mixed_norm_ball(f, args.q, args.alpha, res)
            elif args.kind == "hardy":
                value = bl.hardy_norm(f, args.t, resolution=res)
            elif args.kind == "slice":
                value = bl.slice_norm_ball(f, args.q, args.t, resolution=res)
            elif args.kind == "grad-volume":
                value = bl.grad_volume_norm(f, args.p, args.alpha, res, rad)
            else:
                value = bl.grad_mixed_norm(f, args.p, args.q, args.alpha, res, rad)
        except ValueError as e:
            raise UsageError(str(e))
        summary["value"] = value
        traces.append(("ball-functional-trace",
                       ["kind", "p", "q", "alpha", "t", "value"],
                       [[args.kind, args.p, args.q, args.alpha, args.t, value]]))
        print(repr(value))
    elif args.operation == "lambda":
        f = _load_expansion(args.expansion)
        out = bl.multiplier_lambda(f.n, f.cap, args.t).apply(f)
        summary["expansion"] = out.to_json()
        traces.append(_expansion_trace("ball-lambda-trace", out))
        print(f"applied order-{args.t:g} derivative multiplier"
              f" through degree {out.cap}")
    else:
        f = _load_expansion(args.left)
        g = _load_expansion(args.right)
        try:
            out = bl.convolve(f, g)
        except ValueError as e:
            raise UsageError(str(e))
        summary["expansion"] = out.to_json()
        traces.append(_expansion_trace("ball-convolve-trace", out))
        print(f"convolved through degree {out.cap}")

    paths = _emit(args, summary, traces)
    print(f"wrote {paths[0]}")
    return 0


# ------------------------------------------------------------- whitney


def _cmd_whitney(args, extras):
    if extras:
        raise UsageError(f"unrecognized arguments: {extras}")
    if args.dry_run:
        return _dry_run(args)
    region = _region_from(args)
    cubes = whitney_cubes(region, args.n)
    levels = {}
    for c in cubes:
        levels[c.level] = levels.get(c.level, 0) + 1
    summary = _resolved_config(args)
    summary.update(count=len(cubes),
                   levels={str(k): v for k, v in sorted(levels.items())},
                   cubes=cubes_to_json(cubes))
    header = (["level", "side"] + [f"center_{i}" for i in range(args.n)]
              + ["center_t"])
    rows = []
    for c in cubes:
        row = [c.level, c.side] + [float(v) for v in c.center]
        if args.lam is not None:
            row.append(weighted_measure(c.box(), args.lam))
        rows.append(row)
    if args.lam is not None:
        header.append("weighted_measure")
    paths = _emit(args, summary, [("whitney-cubes", header, rows)])
    print(f"{len(cubes)} boxes across levels "
          f"{min(levels)}..{max(levels)}" if cubes else "0 boxes")
    print(f"wrote {paths[0]}")
    return 0


# --------------------------------------------------------------- parser


def _add_common(sub):
    sub.add_argument("--out", default=os.environ.get("HARMSPACE_OUT", "."),
                     help="output directory (default $HARMSPACE_OUT or .)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--config", default=None,
                     help="JSON config merged under explicit flags")
    sub.add_argument("--dry-run", action="store_true",
                     help="print the resolved configuration and exit")


def _add_region(sub, x_max, t_min, t_max):
    sub.add_argument("--x-max", type=float, default=x_max)
    sub.add_argument("--t-min", type=float, default=t_min)
    sub.add_argument("--t-max", type=float, default=t_max)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmspace",
        description="weighted harmonic function spaces: verification "
                    "experiments, norms, Carleson reports, ball operators")
    subs = parser.add_subparsers(dest="command", required=True)

    v = subs.add_parser("verify", help="run registered experiments")
    v.add_argument("ids", nargs="*",
                   help="experiment ids, or 'all' (extra --key value pairs "
                        "override the experiment's parameters)")
    v.add_argument("--budget", choices=sorted(verify.BUDGETS), default="standard")
    v.add_argument("--threads", type=int, default=1)
    _add_common(v)
    v.set_defaults(func=_cmd_verify, overrides=None)

    m = subs.add_parser("norm", help="compute one norm of one field")
    m.add_argument("--space", required=True,
                   choices=sorted(set(_HALF_SPACES) | set(_BALL_SPACES)))
    m.add_argument("--field", required=True,
                   help="poisson[:s] | bergman-q:l[:s] | test-fn:l[:s] | "
                        "power:lam | expansion-file:PATH")
    m.add_argument("--n", type=int, default=2, help="boundary dimension")
    m.add_argument("--p", type=float, default=2.0)
    m.add_argument("--q", type=float, default=2.0)
    m.add_argument("--alpha", type=float, default=1.0)
    m.add_argument("--lam", type=float, default=1.0)
    m.add_argument("--t", type=float, default=1.0,
                   help="slice height (half-space) or radius (ball)")
    m.add_argument("--order", type=int, default=8)
    m.add_argument("--t-order", type=int, default=6)
    m.add_argument("--resolution", type=int, default=48)
    m.add_argument("--radial", type=int, default=40)
    _add_region(m, 8.0, 2.0 ** -4, 8.0)
    _add_common(m)
    m.set_defaults(func=_cmd_norm)

    c = subs.add_parser("carleson", help="box-condition report for a measure")
    c.add_argument("--measure", required=True, help="measure JSON file")
    c.add_argument("--condition", required=True,
                   choices=["vector", "single", "mixed", "tent"])
    c.add_argument("--s", default="0.5,0.5",
                   help="slot exponents for the vector condition")
    c.add_argument("--alpha", type=float, default=1.0)
    c.add_argument("--p", type=float, default=2.0)
    c.add_argument("--q", type=float, default=2.0)
    c.add_argument("--tau", type=float, default=None)
    _add_region(c, 4.0, 2.0 ** -4, 4.0)
    _add_common(c)
    c.set_defaults(func=_cmd_carleson)

    b = subs.add_parser("ball", help="unit-ball multiplier and norm operators")
    b.add_argument("operation",
                   choices=["multiplier-check", "functional", "lambda",
                            "convolve"])
    b.add_argument("--symbol", default="decay:2.0",
                   help="decay:E | growth:E | identity | zero | file:PATH")
    b.add_argument("--cap", type=int, default=16, help="symbol degree cap")
    b.add_argument("--s", type=float, default=2.0)
    b.add_argument("--beta", type=float, default=1.0)
    b.add_argument("--lam-order", type=float, default=None,
                   help="optional derivative order inside the functional")
    b.add_argument("--rho-levels", type=int, default=8)
    b.add_argument("--expansion", default=None, help="expansion JSON file")
    b.add_argument("--kind", default="volume",
                   choices=["volume", "mixed", "sup", "hardy", "slice",
                            "grad-volume", "grad-mixed"])
    b.add_argument("--left", default=None, help="left expansion file")
    b.add_argument("--right", default=None, help="right expansion file")
    b.add_argument("--p", type=float, default=2.0)
    b.add_argument("--q", type=float, default=2.0)
    b.add_argument("--alpha", type=float, default=1.0)
    b.add_argument("--t", type=float, default=1.0,
                   help="derivative order / radius / hardy scale")
    b.add_argument("--resolution", type=int, default=0,
                   help="sphere grid size (0 = pick from cap)")
    b.add_argument("--radial", type=int, default=40)
    _add_common(b)
    b.set_defaults(func=_cmd_ball)

    w = subs.add_parser("whitney", help="enumerate the box decomposition")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--lam", type=float, default=None,
                   help="also tabulate the weighted measure of each box")
    _add_region(w, 4.0, 2.0 ** -4, 4.0)
    _add_common(w)
    w.set_defaults(func=_cmd_whitney)
    return parser


def main(argv=None) -> int:
    raw = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args, extras = parser.parse_known_args(raw)
    try:
        if args.command == "ball":
            if args.operation == "functional" and not args.expansion:
                raise UsageError("functional needs --expansion FILE")
            if args.operation == "lambda" and not args.expansion:
                raise UsageError("lambda needs --expansion FILE")
            if args.operation == "convolve" and not (args.left and args.right):
                raise UsageError("convolve needs --left and --right files")
        _apply_config_file(args, raw)
        return args.func(args, extras)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
