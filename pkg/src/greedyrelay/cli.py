"""Command-line front end.

    greedyrelay check --config net.json --out results/

Exit codes: 0 success / feasible, 1 infeasible or a property check failed,
2 usage or parse error, 3 a size guard was exceeded.
"""
import argparse
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import region, simulator
from .model import GuardExceeded, ModelError, NodeSet, full_mask, model_from_config, validate
from .schema import error_path, validate_config, validate_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

DEFAULTS = {
    "margin": region.DEFAULT_MARGIN,
    "tol": 1e-6,
    "oracle": "greedy",
    "seed": 0,
    "max_blocks": None,
    "horizon": 1000,
    "directions": 8,
    "phases": 2,
    "resolution": 0.25,
    "format": "json",
}
DELAY_TAIL = 256


class UsageError(Exception):
    pass


def load_config(path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    try:
        validate_config(cfg)
    except jsonschema.ValidationError as e:
        raise UsageError(f"{path}: field {error_path(e)}: {e.message}") from None
    return cfg


def _params(cfg, args):
    # flags win over config values, which win over defaults
    out = dict(DEFAULTS)
    for key in DEFAULTS:
        if key in cfg:
            out[key] = cfg[key]
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
    return out


def _emit(report, args, stem, csv_text=None, csv_stem=None):
    validate_report(report)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.json").write_text(text)
        if csv_text is not None:
            (out / f"{csv_stem or stem}.csv").write_text(csv_text)
    if args.format == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        sys.stdout.write(text)


def _loaded(cfg):
    try:
        return model_from_config(cfg)
    except GuardExceeded:
        raise
    except (ModelError, KeyError, ValueError, TypeError) as e:
        raise UsageError(f"config: {e}") from None


def cmd_validate(cfg, p, args):
    try:
        lm = model_from_config(cfg)
        problems = validate(lm.model, lm.schedule)
    except GuardExceeded:
        raise
    except (ModelError, KeyError, ValueError, TypeError) as e:
        problems = [str(e)]
    report = {"kind": "validation_report", "seed": p["seed"], "model_type": cfg["type"],
              "valid": not problems, "problems": problems}
    _emit(report, args, "validation")
    return EXIT_OK if not problems else EXIT_FAIL


def cmd_check(cfg, p, args):
    lm = _loaded(cfg)
    if lm.rates is None:
        raise UsageError("config: field rates: required for check")
    cert = region.check_feasible(lm.rates, lm.model, lm.schedule, margin=p["margin"])
    report = {**cert.to_dict(), "seed": p["seed"], "model_type": lm.kind}
    _emit(report, args, "certificate", cert.to_csv())
    return EXIT_OK if cert.feasible else EXIT_FAIL


def cmd_symrate(cfg, p, args):
    lm = _loaded(cfg)
    r = region.max_symmetric_rate(lm.model, lm.schedule, tol=p["tol"], margin=p["margin"])
    report = {"kind": "symmetric_rate", "seed": p["seed"], "model_type": lm.kind, "n": lm.model.n,
              "rate_bits": r, "tol": p["tol"], "margin": p["margin"]}
    _emit(report, args, "symrate")
    return EXIT_OK


def cmd_boundary(cfg, p, args):
    lm = _loaded(cfg)
    n = lm.model.n
    dirs = p["directions"]
    if isinstance(dirs, int):
        dirs = region.default_directions(n, dirs, seed=p["seed"])
    dirs = np.asarray(dirs, dtype=float)
    if dirs.ndim != 2 or dirs.shape[1] != n:
        raise UsageError(f"config: field directions: expected rows of length {n}")
    try:
        rows = region.boundary_table(dirs, lm.model, lm.schedule, tol=p["tol"], margin=p["margin"])
    except ModelError as e:
        raise UsageError(f"directions: {e}") from None
    report = {"kind": "boundary", "seed": p["seed"], "model_type": lm.kind, "n": n, "tol": p["tol"],
              "rows": [{"direction": d.tolist(), "scale": t, "rates": r.tolist()} for d, t, r in rows]}
    _emit(report, args, "boundary", region.boundary_csv(rows))
    return EXIT_OK


def cmd_hdopt(cfg, p, args):
    lm = _loaded(cfg)
    n = lm.model.n
    if lm.kind == "dmc":
        raise UsageError("config: field type: hdopt needs an AWGN network")
    if "candidates" in cfg:
        cands = [NodeSet.of(n, c, one_based=True).mask for c in cfg["candidates"]]
    else:
        cands = list(range(1, full_mask(n)))
    sched, rate = region.optimize_hd_schedule(lm.model, int(p["phases"]), cands, float(p["resolution"]),
                                              tol=p["tol"], margin=p["margin"])
    report = {"kind": "hd_schedule", "seed": p["seed"], "model_type": lm.kind, "n": n,
              "rate_bits": rate, "lengths": list(sched.lengths),
              "transmitters": [NodeSet(T, n).one_based() for T in sched.transmitters],
              "note": f"best on grid (resolution {p['resolution']}, K={p['phases']})"}
    _emit(report, args, "hdopt")
    return EXIT_OK


def cmd_simulate(cfg, p, args):
    lm = _loaded(cfg)
    if lm.rates is None:
        raise UsageError("config: field rates: required for simulate")
    horizon = int(p["horizon"])
    max_blocks = p["max_blocks"] if p["max_blocks"] is not None else horizon + DELAY_TAIL
    try:
        oracle = simulator.DecodeOracle.parse(p["oracle"], seed=int(p["seed"]))
    except (ModelError, ValueError) as e:
        raise UsageError(f"oracle: {e}") from None
    try:
        trace = simulator.run(lm.model, lm.rates, oracle, int(max_blocks), lm.schedule,
                              margin=p["margin"], check_bound=False)
    except simulator.InfeasibleRates as e:
        print(f"infeasible rates: {e}", file=sys.stderr)
        return EXIT_FAIL
    delays = None
    if trace.completion_block is not None and 4 <= horizon <= trace.blocks:
        delays = simulator.measure_delays(trace, horizon)
    summary = simulator.trace_summary(trace, delays)
    summary["seed"] = int(p["seed"])
    summary["model_type"] = lm.kind
    _emit(summary, args, "summary", simulator.trace_csv(trace), csv_stem="trace")
    ok = summary["bound_ok"] and (delays is None or delays.stabilized)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "validate": cmd_validate,
    "check": cmd_check,
    "symrate": cmd_symrate,
    "boundary": cmd_boundary,
    "hdopt": cmd_hdopt,
    "simulate": cmd_simulate,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="greedyrelay", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, metavar="PATH")
        sp.add_argument("--out", metavar="DIR")
        sp.add_argument("--margin", type=float, metavar="BITS")
        sp.add_argument("--tol", type=float, metavar="BITS")
        sp.add_argument("--max-blocks", dest="max_blocks", type=int, metavar="N")
        sp.add_argument("--horizon", type=int, metavar="N")
        sp.add_argument("--oracle", metavar="MODE")
        sp.add_argument("--seed", type=int, metavar="U64")
        sp.add_argument("--directions", type=int, metavar="N")
        sp.add_argument("--format", choices=("json", "csv"))
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        p = _params(cfg, args)
        args.format = p["format"]
        if not 0 <= int(p["seed"]) < 2**64:
            raise UsageError("seed must fit in 64 bits")
        if p["margin"] < 0 or p["tol"] <= 0:
            raise UsageError("margin must be >= 0 and tol > 0")
        return COMMANDS[args.command](cfg, p, args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GuardExceeded as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
