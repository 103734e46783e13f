"""Command-line front end.

Every analysis is reachable as a subcommand; results are emitted as JSON
(one object per run, schema_version "1") or CSV (17 significant digits).
Exit codes: 0 success, 1 analysis failure, 2 usage error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import fixed_points as fp
from . import flip as flipmod
from . import nullclines as nc
from . import orbits
from .errors import RickerError
from .model import ModelParams, State, absorbing_box, iterate
from .fixed_points import NoPositiveFixedPoint

SCHEMA_VERSION = "1"

_PARAM_KEYS = ("r", "b0", "gamma", "c", "s")
# Commands that run without a concrete r value.
_R_OPTIONAL = {"flip", "sweep", "thresholds"}


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def parse_params(text: str, command: str) -> ModelParams:
    """Parse `r=..,b0=..,gamma=..,c=..,s=..`; r may be `skip` where the
    command does not need it."""
    values = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"--params entry {item!r} is not key=value")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key == "r0":  # tolerated alias for r
            key = "r"
        if key not in _PARAM_KEYS:
            raise UsageError(f"--params has unknown key {key!r} "
                             f"(expected {', '.join(_PARAM_KEYS)})")
        if key == "r" and raw.strip().lower() in ("skip", "none", ""):
            values["r"] = None
            continue
        try:
            values[key] = float(raw)
        except ValueError:
            raise UsageError(f"--params value for {key!r} is not a number: {raw!r}")
    for key in _PARAM_KEYS:
        if key == "r":
            if values.get("r") is None:
                if command in _R_OPTIONAL:
                    values["r"] = 1.0  # placeholder; these commands ignore r
                elif "r" not in values:
                    raise UsageError("missing required parameter 'r' in --params")
                else:
                    raise UsageError(f"parameter 'r' may not be skipped for "
                                     f"command {command!r}")
        elif key not in values:
            raise UsageError(f"missing required parameter {key!r} in --params")
    try:
        return ModelParams(**values)
    except RickerError as exc:
        raise UsageError(str(exc))


def _parse_start(text: str) -> State:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--start must be 'x,y', got {text!r}")
    try:
        return State(float(parts[0]), float(parts[1]))
    except ValueError:
        raise UsageError(f"--start coordinates must be numbers: {text!r}")


def load_config(path: str) -> dict:
    """Flat key = value file, one key per line, '#' comments."""
    out = {}
    try:
        with open(path, "r", encoding="ascii") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(
                        f"{path}:{lineno}: expected key = value, got {line!r}")
                key, _, value = line.partition("=")
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    return out


def _emit(payload, fmt: str, out_path: Optional[str], csv_rows=None,
          csv_header=None) -> int:
    """Write JSON payload or CSV rows to out_path / stdout."""
    if fmt == "csv":
        lines = [",".join(csv_header)]
        for row in csv_rows:
            lines.append(",".join(
                "" if v is None else (_fmt(v) if isinstance(v, float) else str(v))
                for v in row))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"schema_version": SCHEMA_VERSION, **payload},
                          indent=2, allow_nan=True) + "\n"
    try:
        if out_path:
            with open(out_path, "w", encoding="ascii") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0


def _stability_dict(rep: fp.StabilityReport) -> dict:
    d = {
        "trace": rep.trace, "det": rep.det,
        "jury_a": rep.jury_a, "jury_b": rep.jury_b, "jury_c": rep.jury_c,
        "classification": rep.classification,
        "non_hyperbolic": rep.non_hyperbolic,
    }
    if rep.globally_stable is not None:
        d["globally_stable"] = rep.globally_stable
    return d


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rickerpp",
        description="Discrete Ricker-type predator-prey map analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, output_default="json"):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--params", help="r=..,b0=..,gamma=..,c=..,s=..")
        p.add_argument("--config", help="flat key = value config file")
        p.add_argument("--output", choices=("csv", "json"),
                       default=output_default)
        p.add_argument("--out", dest="out_path", default=None,
                       help="output file (default stdout)")
        return p

    p = add("simulate", "iterate an orbit", output_default="csv")
    p.add_argument("--start", default="1,1")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--transient", type=int, default=0)

    add("fixed-points", "locate all fixed points")
    add("stability", "Jury stability of every fixed point")
    add("global-check", "closed-form global-stability criteria")

    p = add("nullcline-verify", "nested-rectangle convergence check")
    p.add_argument("--max-levels", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-10)

    p = add("flip", "period-doubling normal form")
    p.add_argument("--r-lo", type=float, default=None)
    p.add_argument("--r-hi", type=float, default=None)

    p = add("sweep", "attractor sweep over r", output_default="csv")
    p.add_argument("--r-from", type=float, required=True)
    p.add_argument("--r-to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--start", default="1,1")
    p.add_argument("--period", action="store_true", default=False)
    p.add_argument("--lyapunov", action="store_true", default=False)
    p.add_argument("--transient", type=int, default=orbits.DEFAULT_TRANSIENT)

    p = add("lyapunov", "largest Lyapunov exponent")
    p.add_argument("--start", default="1,1")
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--transient", type=int, default=orbits.DEFAULT_TRANSIENT)

    p = add("detect-period", "minimal attractor period")
    p.add_argument("--start", default="1,1")
    p.add_argument("--cap", type=int, default=orbits.PERIOD_CAP)
    p.add_argument("--tol", type=float, default=orbits.RECURRENCE_TOL)
    p.add_argument("--transient", type=int, default=orbits.DEFAULT_TRANSIENT)

    p = add("thresholds", "doubling threshold / chaos onset in r")
    p.add_argument("--from-period", type=int, default=None)
    p.add_argument("--chaos", action="store_true", default=False)
    p.add_argument("--r-lo", type=float, required=True)
    p.add_argument("--r-hi", type=float, required=True)
    p.add_argument("--start", default="1,1")
    return parser


def _apply_config(parser, args, argv):
    if not getattr(args, "config", None):
        return args
    cfg = load_config(args.config)
    sub_actions = {}
    for action in parser._subparsers._group_actions[0].choices[args.command]._actions:
        for opt in action.option_strings:
            sub_actions[opt.lstrip("-").replace("-", "_")] = action
    for key, value in cfg.items():
        if key not in sub_actions:
            raise UsageError(f"unknown config key {key!r} for command "
                             f"{args.command!r}")
        action = sub_actions[key]
        flag = "--" + key.replace("_", "-")
        if any(a.startswith(flag) or a == flag for a in argv):
            continue  # flags override the config file
        if isinstance(action.const, bool) or action.nargs == 0:
            setattr(args, action.dest, value.lower() in ("1", "true", "yes"))
        elif action.type is int:
            setattr(args, action.dest, int(value))
        elif action.type is float:
            setattr(args, action.dest, float(value))
        else:
            setattr(args, action.dest, value)
    return args


def run(args) -> int:
    params = parse_params(args.params, args.command) if args.params else None
    if params is None:
        raise UsageError("--params is required (directly or via --config)")
    cmd = args.command

    if cmd == "simulate":
        orbit = iterate(params, _parse_start(args.start), args.n,
                        args.transient)
        rows = [(k, st.x, st.y) for k, st in enumerate(orbit.samples)]
        payload = {"command": cmd, "samples": [[s.x, s.y] for s in orbit.samples],
                   "transient_discarded": orbit.transient_discarded}
        return _emit(payload, args.output, args.out_path, rows,
                     ("step", "x", "y"))

    if cmd == "fixed-points":
        box = absorbing_box(params)
        payload = {"command": cmd,
                   "trivial": [0.0, 0.0],
                   "absorbing_box": {"k1": box.K1, "k2": box.K2}}
        if params.r > 0:
            payload["predator_free"] = [params.r, 0.0]
        try:
            p = fp.solve_positive(params)
            payload["positive"] = {
                "x_star": p.x_star, "y_star": p.y_star,
                "residual": p.residual, "bracket": list(p.bracket)}
        except NoPositiveFixedPoint as exc:
            payload["positive"] = None
            payload["positive_absent_reason"] = str(exc)
        rmin = fp.existence_threshold(params)
        payload["existence_threshold"] = rmin
        return _emit(payload, args.output, args.out_path)

    if cmd == "stability":
        payload = {"command": cmd,
                   "trivial": _stability_dict(fp.classify_trivial(params))}
        if params.r > 0:
            payload["predator_free"] = _stability_dict(
                fp.classify_predator_free(params))
        p = fp.solve_positive(params)
        payload["positive"] = _stability_dict(fp.classify_positive(params, p))
        payload["sufficient_local_criterion"] = fp.sufficient_local_criterion(params)
        return _emit(payload, args.output, args.out_path)

    if cmd == "global-check":
        window = fp.corollary_sufficient_window(params)
        payload = {
            "command": cmd,
            "global_stability_criterion": fp.global_stability_criterion(params),
            "sufficient_local_criterion": fp.sufficient_local_criterion(params),
            "corollary_window": list(window) if window else None,
        }
        return _emit(payload, args.output, args.out_path)

    if cmd == "nullcline-verify":
        ncs = nc.build(params)
        seq = nc.rectangle_iteration(ncs, args.max_levels, args.tol)
        Am, AM, Bm, BM = seq.levels[-1]
        payload = {
            "command": cmd,
            "criterion_holds": fp.global_stability_criterion(params),
            "converged": seq.converged,
            "levels": len(seq.levels),
            "final_gap": seq.final_gap,
            "final_rectangle": [Am, AM, Bm, BM],
            "x_star": ncs.x_star, "y_star": ncs.y_star,
        }
        rows = [(k,) + lvl for k, lvl in enumerate(seq.levels)]
        return _emit(payload, args.output, args.out_path, rows,
                     ("level", "a_min", "a_max", "b_min", "b_max"))

    if cmd == "flip":
        bracket = None
        if args.r_lo is not None and args.r_hi is not None:
            bracket = (args.r_lo, args.r_hi)
        rep = flipmod.flip_coefficients(params, bracket)
        payload = {
            "command": cmd,
            "r_star": rep.r_star, "det_j": rep.det_J,
            "eta": list(rep.eta),
            "alphas": {"".join(map(str, k)): v for k, v in rep.alphas.items()},
            "betas": {"".join(map(str, k)): v for k, v in rep.betas.items()},
            "d": list(rep.d), "a1": rep.a1, "a2": rep.a2,
            "sigma1": rep.sigma1, "sigma2": rep.sigma2,
            "sigma2_variants": rep.sigma2_variants,
            "classification": rep.classification,
        }
        return _emit(payload, args.output, args.out_path)

    if cmd == "sweep":
        rows = orbits.sweep(params, args.r_from, args.r_to, args.steps,
                            M=args.samples, start=_parse_start(args.start),
                            with_period=args.period,
                            with_lyapunov=args.lyapunov,
                            transient=args.transient)
        csv_rows = []
        for row in rows:
            for st in row.attractor_samples:
                csv_rows.append((row.r, st.x, st.y, row.period, row.lambda1))
        payload = {"command": cmd, "rows": [
            {"r": row.r, "period": row.period, "lambda1": row.lambda1,
             "error": row.error,
             "attractor_samples": [[s.x, s.y] for s in row.attractor_samples]}
            for row in rows]}
        return _emit(payload, args.output, args.out_path, csv_rows,
                     ("r", "x", "y", "period", "lambda1"))

    if cmd == "lyapunov":
        est = orbits.lyapunov1(params, _parse_start(args.start), args.n,
                               args.transient)
        payload = {"command": cmd, "lambda1": est.lambda1, "n": est.n,
                   "transient": est.transient, "degenerate": est.degenerate}
        return _emit(payload, args.output, args.out_path)

    if cmd == "detect-period":
        res = orbits.detect_period(params, _parse_start(args.start),
                                   cap=args.cap, tol=args.tol,
                                   transient=args.transient)
        payload = {"command": cmd, "period": res.period,
                   "representative": [res.representative.x,
                                      res.representative.y],
                   "residual": res.residual, "refined": res.refined}
        return _emit(payload, args.output, args.out_path)

    if cmd == "thresholds":
        start = _parse_start(args.start)
        if args.chaos:
            r = orbits.find_chaos_onset(params, args.r_lo, args.r_hi,
                                        start=start)
            payload = {"command": cmd, "kind": "chaos_onset", "r": r}
        else:
            if args.from_period is None:
                raise UsageError("thresholds requires --from-period or --chaos")
            r = orbits.find_doubling_threshold(params, args.r_lo, args.r_hi,
                                               args.from_period, start=start)
            payload = {"command": cmd, "kind": "doubling",
                       "from_period": args.from_period, "r": r}
        return _emit(payload, args.output, args.out_path)

    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args = _apply_config(parser, args, argv)
        return run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except RickerError as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
