"""Command-line front end: bound, simulate, sweep, plan, selftest."""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .bounds import bound_general, bound_general_approx
from .config import check_keys, load_config, mc_from_config, scenario_from_config
from .errors import (ApproximationDomainError, ConfigError, DudecapError, NonMonotoneError,
                     SamplingInconsistencyError, UnreachableTargetError)
from .experiments import rows_to_csv, run_sweep, sweep_from_config
from .montecarlo import simulate_ergodic_rate
from .planner import PlanRequest, plan_min_density, rate_from_units, rate_to_target_units
from .selftest import run_selftest

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNREACHABLE = 3
EXIT_NON_MONOTONE = 4
EXIT_APPROXIMATION = 5
EXIT_INVARIANT = 6


class InvariantFailure(DudecapError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "NaN" if math.isnan(obj) else ("Infinity" if obj > 0 else "-Infinity")
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _add_scenario_args(p):
    p.add_argument("--config", help="flat JSON scenario file")
    p.add_argument("--policy", choices=["macro", "sc", "decoupled", "coupled"])
    p.add_argument("--d0", type=float, dest="d0_m", help="distance to the macro AP, m")
    p.add_argument("--lambda", type=float, dest="lambda_sc", help="small-cell density, SC/m^2")
    p.add_argument("--m-antennas", type=int, dest="m_antennas")
    p.add_argument("--n-antennas", type=int, dest="n_antennas")
    p.add_argument("--units", choices=["nats", "bits", "mbps"], default="nats")


def _raw_config(args, extra=()):
    raw = dict(load_config(args.config)) if args.config else {}
    for key in ("policy", "d0_m", "lambda_sc", "m_antennas", "n_antennas") + tuple(extra):
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    return check_keys(raw)


def _rate_block(nats, units, bandwidth_hz):
    return {"units": units, "value": rate_to_target_units(max(nats, 0.0), bandwidth_hz)[units]}


def _scenario_dict(s):
    return {"policy": s.policy.name, "m_antennas": s.policy.m_antennas,
            "n_antennas": s.policy.n_antennas, "lambda_sc": s.lambda_sc, "d0_m": s.d0_m,
            "alpha": s.alpha, "gamma": s.gamma, "noise_power_dbm": s.link.noise_power_dbm,
            "saturation_arg": s.saturation_arg}


def cmd_bound(args, out):
    scenario = scenario_from_config(_raw_config(args))
    breakdown = bound_general_approx(scenario) if args.approx else bound_general(scenario)
    result = breakdown.to_dict()
    result["scenario"] = _scenario_dict(scenario)
    result["rate"] = _rate_block(breakdown.total_nats, args.units, scenario.link.bandwidth_hz)
    out.write(_dump(result))


def cmd_simulate(args, out):
    raw = _raw_config(args, extra=("n_samples", "seed", "sampling_mode"))
    scenario = scenario_from_config(raw)
    config = mc_from_config(raw, workers=args.workers)
    est = simulate_ergodic_rate(scenario, config)
    result = est.to_dict()
    result["scenario"] = _scenario_dict(scenario)
    # workers never changes the numbers, so it is left out of the output
    mc = config.to_dict()
    mc.pop("workers")
    result["config"] = mc
    result["rate"] = _rate_block(est.mean_nats, args.units, scenario.link.bandwidth_hz)
    out.write(_dump(result))


def cmd_sweep(args, out):
    spec = sweep_from_config(load_config(args.spec), workers=args.workers)
    rows = run_sweep(spec)
    bad = [r for r in rows if not r.bound_valid]
    text = rows_to_csv(rows)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)
    if bad:
        raise InvariantFailure(f"{len(bad)} sweep rows have bound > MC mean + 3 stderr")


def cmd_plan(args, out):
    raw = _raw_config(args, extra=("tolerance",))
    if args.lambda_bracket is not None:
        raw["lambda_bracket"] = args.lambda_bracket
    scenario_raw = dict(raw)
    scenario_raw.setdefault("lambda_sc", 1.0)
    scenario = scenario_from_config(scenario_raw)
    link = scenario.link
    if args.target is not None:
        target = rate_from_units(args.target, args.units, link.bandwidth_hz)
    elif "target_rate" in raw:
        target = float(raw["target_rate"])
    else:
        raise ConfigError("a target rate is required (--target or target_rate)", key="target_rate")
    kwargs = {}
    if "lambda_bracket" in raw:
        kwargs["lambda_bracket"] = raw["lambda_bracket"]
    if "tolerance" in raw:
        kwargs["tolerance"] = raw["tolerance"]
    request = PlanRequest(target, scenario.d0_m, scenario.policy, link, **kwargs)
    result = plan_min_density(request).to_dict()
    result["target_rate_nats"] = target
    result["rate"] = _rate_block(result["achieved_bound"]["total_nats"], args.units,
                                 link.bandwidth_hz)
    out.write(_dump(result))


def cmd_selftest(args, out):
    report = run_selftest(n_samples=args.n_samples, seed=args.seed, workers=args.workers)
    out.write(_dump(report))
    if not report["passed"]:
        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        raise InvariantFailure(f"selftest checks failed: {', '.join(failed)}")


def build_parser():
    parser = _Parser(prog="dudecap", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="closed-form lower bound for one scenario")
    _add_scenario_args(p)
    p.add_argument("--approx", action="store_true", help="use the saturated-integral approximation")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("simulate", help="Monte Carlo estimate for one scenario")
    _add_scenario_args(p)
    p.add_argument("--n-samples", type=int, dest="n_samples")
    p.add_argument("--seed", type=int)
    p.add_argument("--sampling-mode", choices=["inverse_cdf", "finite_ppp"], dest="sampling_mode")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="sweep d0 or lambda, write CSV")
    p.add_argument("--spec", required=True, help="flat JSON sweep spec")
    p.add_argument("--out", help="CSV path (default: standard output)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plan", help="minimum small-cell density for a target rate")
    _add_scenario_args(p)
    p.add_argument("--target", type=float, help="target rate in --units")
    p.add_argument("--lambda-bracket", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("selftest", help="run the invariant suite at reduced sample counts")
    p.add_argument("--n-samples", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_selftest)
    return parser


def _exit_code(exc) -> int:
    if isinstance(exc, UnreachableTargetError):
        return EXIT_UNREACHABLE
    if isinstance(exc, NonMonotoneError):
        return EXIT_NON_MONOTONE
    if isinstance(exc, ApproximationDomainError):
        return EXIT_APPROXIMATION
    if isinstance(exc, (InvariantFailure, SamplingInconsistencyError)):
        return EXIT_INVARIANT
    return EXIT_CONFIG


def _error_object(exc, code) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("key", "bound_at_upper", "saturation_arg", "pair"):
        value = getattr(exc, attr, None)
        if value is not None:
            err[attr] = value
    return {"error": err}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "workers", 1) < 1:
            raise ConfigError("--workers must be >= 1", key="workers")
        args.func(args, stdout)
    except (DudecapError, ValueError) as exc:
        code = _exit_code(exc)
        stderr.write(_dump(_error_object(exc, code)))
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
