"""Command-line interface: ``csfrot {check,geometry,simulate,compare,verify}``.

Exit codes: 0 success, 2 input or precondition error, 3 flow failure during
a run, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import jsonschema
import numpy as np

from . import _kernels
from .errors import CsfrotError, FlowError, InputError
from .flow import FlowConfig, InitialCurveSpec, run
from .geometry import surface_scalars
from .output import RunWriter, write_geometry
from .profile import ProfileSpec, power_btilde, setting_rs_margin, validity_window
from . import verify

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FLOW = 3
EXIT_VERIFY = 4

OUTPUT_ENV = "CSFROT_OUTPUT_DIR"

log = logging.getLogger("csfrot")

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["profile", "initial", "n", "t_end"],
    "properties": {
        "profile": {
            "type": "object",
            "additionalProperties": False,
            "required": ["family"],
            "properties": {
                "family": {"enum": ["power", "exp_inverse"]},
                "alpha": {"type": "number"},
            },
        },
        "initial": {
            "type": "object",
            "additionalProperties": False,
            "required": ["c0"],
            "properties": {
                "c0": {"type": "number"},
                "modes": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["m", "amplitude"],
                        "properties": {
                            "m": {"type": "integer", "minimum": 1},
                            "amplitude": {"type": "number"},
                            "phase": {"type": "number"},
                        },
                    },
                },
            },
        },
        "n": {"type": "integer", "minimum": 16},
        "t_end": {"type": "number", "exclusiveMinimum": 0},
        "cfl_safety": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
        "snapshot_every": {"type": ["number", "null"], "minimum": 0},
        "output_dir": {"type": "string"},
        "kappa_blowup_guard": {"type": "number", "exclusiveMinimum": 0},
    },
}


def load_config(path, overrides=None):
    """Read and validate a run configuration; returns ``(FlowConfig, output_dir)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"invalid config {path}: {exc.message}") from exc
    cfg = FlowConfig(
        profile=ProfileSpec.from_dict(data["profile"]),
        initial=InitialCurveSpec.from_dict(data["initial"]),
        n=data["n"],
        t_end=float(data["t_end"]),
        cfl_safety=float(data.get("cfl_safety", 0.25)),
        snapshot_every=data.get("snapshot_every"),
        kappa_blowup_guard=float(data.get("kappa_blowup_guard", 1e6)),
    )
    out = data.get("output_dir") or os.environ.get(OUTPUT_ENV) or "csfrot_out"
    return cfg, out


def parse_range(text):
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise InputError(f"range must look like LO:HI, got {text!r}") from exc
    return lo, hi


def profile_from_args(args):
    if args.profile == "power":
        if args.alpha is None:
            raise InputError("--alpha is required for the power profile")
        return ProfileSpec.power(args.alpha)
    return ProfileSpec.exp_inverse()


# -- subcommands --------------------------------------------------------------

def cmd_check(args):
    profile = profile_from_args(args)
    z_lo, z_hi = parse_range(args.z_range)
    win = validity_window(profile, z_lo, z_hi, args.n_scan)
    print(f"profile: {json.dumps(profile.to_dict())}")
    print(f"scanned range: [{z_lo:g}, {z_hi:g}] with {args.n_scan} points")
    print(f"b_tilde (numeric): {win.b_tilde:.10f}")
    if profile.family == "power":
        print(f"b_tilde (closed form): {power_btilde(profile.alpha):.10f}")
    print(f"minimal inequality margin on window: {win.margin:.6g}")
    zs = np.linspace(z_lo, win.b_tilde, 6)[:-1]
    for z in zs:
        ok, m = setting_rs_margin(profile, z)
        print(f"  z={z: .6f}  slope_ok={ok}  margin={m: .6e}")
    return EXIT_OK


def cmd_geometry(args):
    profile = profile_from_args(args)
    if args.z:
        zs = np.array(args.z, dtype=float)
    else:
        lo, hi = parse_range(args.z_range)
        zs = np.linspace(lo, hi, args.samples)
    if zs.size:
        scalars = surface_scalars(profile, zs)
    else:
        scalars = type("Empty", (), {k: np.array([]) for k in
                                     ("z", "kcal", "kbar", "g_speed", "pc_theta", "pc_z")})
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            write_geometry(fh, scalars)
    else:
        write_geometry(sys.stdout, scalars)
    return EXIT_OK


def _simulate(cfg, out_dir):
    with RunWriter(out_dir, cfg.profile) as writer:
        try:
            result = run(cfg, on_row=writer.on_row, on_snapshot=writer.on_snapshot)
        except FlowError as exc:
            return exc.partial, str(exc)
    return result, None


def _summary(result, reason):
    if not result.diagnostics:
        return f"t_final=0 z_max=nan kappa_max=nan reason={reason or 'completed'}"
    last = result.diagnostics[-1]
    return (f"t_final={last.t:.17g} z_max={last.z_max:.17g} "
            f"kappa_max={last.kappa_max:.17g} reason={reason or 'completed'}")


def cmd_simulate(args):
    cfg, out_dir = load_config(args.config, {
        "n": args.n, "t_end": args.t_end, "cfl_safety": args.cfl_safety,
        "snapshot_every": args.snapshot_every, "output_dir": args.output_dir})
    result, failure = _simulate(cfg, out_dir)
    print(_summary(result, failure))
    return EXIT_FLOW if failure else EXIT_OK


def cmd_compare(args):
    cfg_a, out_a = load_config(args.config_a)
    cfg_b, out_b = load_config(args.config_b)
    if cfg_a.profile != cfg_b.profile:
        raise InputError("both configs must use the same profile")
    za = cfg_a.initial.z_range(max(8192, cfg_a.n))[1]
    zb = cfg_b.initial.z_range(max(8192, cfg_b.n))[0]
    if za > zb + 1e-12:
        raise InputError(f"initial data not ordered: z_max(0)={za:.10g} > z_min(0)={zb:.10g}")
    results = []
    for cfg in (cfg_a, cfg_b):
        try:
            results.append(run(cfg))
        except FlowError as exc:
            print(f"flow failure: {exc}")
            return EXIT_FLOW
    report = verify.check_comparison(*results)
    print(report.line())
    print(report.to_json())
    return EXIT_OK if report.status != verify.FAIL else EXIT_VERIFY


def cmd_verify(args):
    only = None
    if args.only:
        only = [g for item in args.only for g in item.split(",") if g]
    out_dir = args.output_dir or os.environ.get(OUTPUT_ENV) or "csfrot_out"
    report_path = args.report or os.path.join(out_dir, "verify_report.jsonl")
    os.makedirs(os.path.dirname(os.path.abspath(report_path)), exist_ok=True)
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        def emit(rep):
            print(rep.line(), flush=True)
            fh.write(rep.to_json() + "\n")
            fh.flush()
        reports = verify.run_suite(only=only, profile=profile_from_args(args),
                                   longtime_t_end=args.longtime_t_end, log=emit)
    n_fail = sum(r.status == verify.FAIL for r in reports)
    n_inc = sum(r.status == verify.INCONCLUSIVE for r in reports)
    print(f"{len(reports)} checks: {len(reports) - n_fail - n_inc} pass, {n_fail} fail, "
          f"{n_inc} inconclusive; report written to {report_path}")
    if n_inc:
        print("warning: inconclusive checks do not fail the run", file=sys.stderr)
    return EXIT_VERIFY if n_fail else EXIT_OK


# -- parser -------------------------------------------------------------------

_VALUE_FLAGS = ("--z-range",)


def _join_negative_values(argv):
    """Let ``--z-range -10:-0.1`` through argparse, which would read it as a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _add_profile_args(p):
    p.add_argument("--profile", choices=["power", "exp_inverse"], default="power")
    p.add_argument("--alpha", type=float, default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="csfrot",
                                     description="Curve shortening flow on rotational surfaces.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="locate the admissible window of a profile")
    _add_profile_args(p)
    p.add_argument("--z-range", default="-10:-0.1")
    p.add_argument("--n-scan", type=int, default=10_000)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("geometry", help="tabulate surface scalars as CSV")
    _add_profile_args(p)
    p.add_argument("--z-range", default="-10:-1")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--z", type=float, action="append", help="explicit z value (repeatable)")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("simulate", help="run a flow from a JSON config")
    p.add_argument("config")
    p.add_argument("--n", type=int)
    p.add_argument("--t-end", type=float)
    p.add_argument("--cfl-safety", type=float)
    p.add_argument("--snapshot-every", type=float)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="run two flows and test the comparison principle")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--only", action="append",
                   help=f"comma-separated subset of {','.join(verify.GROUPS)}")
    p.add_argument("--profile", choices=["power", "exp_inverse"], default="power")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--longtime-t-end", type=float, default=1000.0)
    p.add_argument("--report")
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    argv = _join_negative_values(sys.argv[1:] if argv is None else list(argv))
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("kernel backend: %s", _kernels.BACKEND_NAME)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CsfrotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FLOW


if __name__ == "__main__":
    sys.exit(main())
