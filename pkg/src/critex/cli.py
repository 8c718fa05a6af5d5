"""Command line interface.

Every experiment takes long-form flags only; ``--config FILE`` loads a flat
JSON object mirroring the flags, with explicit flags taking precedence.
Run artifacts land under ``--out``, the ``CRITEX_OUT`` environment variable,
or ``./runs``, in that order.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments
from .errors import CritexError
from .exponents import (RegimeParams, alpha0, classify_regime, gamma_tilde,
                        lifespan_exponent, p_crit, p_fujita,
                        sharp_lifespan_admissible)
from .propagators import propagator

_REQUIRED = object()


def _merged(args: argparse.Namespace, fields: dict[str, object]) -> dict:
    file_values = {}
    if getattr(args, "config", None):
        file_values = json.loads(Path(args.config).read_text())
    merged = {}
    missing = []
    for name, default in fields.items():
        cli_value = getattr(args, name)
        if cli_value is not None:
            merged[name] = cli_value
        elif name in file_values:
            merged[name] = file_values[name]
        elif default is _REQUIRED:
            missing.append(name)
        else:
            merged[name] = default
    if missing:
        raise CritexError(
            "missing required options: " + ", ".join(f"--{m.replace('_', '-')}"
                                                     for m in missing))
    return merged


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _float_list(text: str) -> list[float]:
    return [float(item) for item in text.split(",") if item]


# ---------------------------------------------------------------------------
# handlers
# ---------------------------------------------------------------------------

def _cmd_exponents(args) -> int:
    values = _merged(args, {"n": _REQUIRED, "gamma": _REQUIRED,
                            "p": None, "s": 1.0})
    n, gamma = float(values["n"]), float(values["gamma"])
    derived = {"p_crit": p_crit(n, gamma), "p_fujita": p_fujita(n),
               "gamma_tilde": gamma_tilde(n)}
    payload = {"params": {"n": n, "gamma": gamma}, "derived": derived}
    if values["p"] is not None:
        p = float(values["p"])
        s = float(values["s"])
        params = RegimeParams(n=n, gamma=gamma, s=s, p=p)
        payload["params"].update({"p": p, "s": s})
        try:
            payload["verdict"] = classify_regime(params).to_json()
        except CritexError as error:
            # e.g. the formal boundary gamma = n/2: lifespan arithmetic still
            # applies but the existence/blow-up classification does not
            payload["verdict_error"] = str(error)
        admissible = sharp_lifespan_admissible(params)
        payload["sharp_lifespan_admissible"] = admissible.admissible
        if p < derived["p_crit"]:
            payload["derived"]["lifespan_exponent"] = lifespan_exponent(p, n, gamma)
            payload["derived"]["alpha0"] = alpha0(p, n, gamma)
    _emit(payload)
    return 0


def _cmd_probe(args) -> int:
    values = _merged(args, {"t": _REQUIRED, "r": _REQUIRED})
    times = _float_list(str(values["t"]))
    radii = _float_list(str(values["r"]))
    sys.stdout.write("t,r,k00,k01,k10,k11\n")
    for t in times:
        for r in radii:
            mat = propagator(t, r)
            sys.stdout.write(
                f"{t!r},{r!r},{mat.k00!r},{mat.k01!r},{mat.k10!r},{mat.k11!r}\n")
    return 0


def _cmd_linear_decay(args) -> int:
    values = _merged(args, {"n": _REQUIRED, "gamma": _REQUIRED, "s": _REQUIRED,
                            "profile": _REQUIRED, "t0": 1.0, "t1": 1e5,
                            "points": 96, "out": None, "seed": 0})
    run_dir, report = experiments.experiment_linear_decay(
        float(values["n"]), float(values["gamma"]), float(values["s"]),
        str(values["profile"]), float(values["t0"]), float(values["t1"]),
        int(values["points"]), values["out"], int(values["seed"]))
    _emit({"run_dir": str(run_dir), **report})
    return 0


def _cmd_diffusion(args) -> int:
    values = _merged(args, {"n": _REQUIRED, "gamma": _REQUIRED, "s": _REQUIRED,
                            "profile": _REQUIRED, "t0": 1.0, "t1": 1e5,
                            "points": 96, "out": None, "seed": 0})
    run_dir, report = experiments.experiment_diffusion(
        float(values["n"]), float(values["gamma"]), float(values["s"]),
        str(values["profile"]), float(values["t0"]), float(values["t1"]),
        int(values["points"]), values["out"], int(values["seed"]))
    _emit({"run_dir": str(run_dir), **report})
    return 0


def _cmd_evolve(args) -> int:
    values = _merged(args, {"dim": _REQUIRED, "N": None, "L": None,
                            "p": _REQUIRED, "eps": _REQUIRED,
                            "gamma": _REQUIRED, "s": 1.0, "dt": 0.02,
                            "tend": 100.0, "snapshots": 0, "theta": 1e8,
                            "out": None, "seed": 0})
    run_dir, meta = experiments.experiment_evolve(
        int(values["dim"]),
        int(values["N"]) if values["N"] is not None else None,
        float(values["L"]) if values["L"] is not None else None,
        float(values["p"]), float(values["eps"]), float(values["gamma"]),
        float(values["s"]), float(values["dt"]), float(values["tend"]),
        int(values["snapshots"]), float(values["theta"]), values["out"],
        int(values["seed"]))
    _emit({"run_dir": str(run_dir), "status": meta["status"],
           "blow_up_time": meta["blow_up_time"],
           "weighted_sup": meta["weighted_sup"]})
    return 0


def _cmd_lifespan(args) -> int:
    # defaults give 8 geometric points per decade of eps
    values = _merged(args, {"dim": _REQUIRED, "gamma": _REQUIRED,
                            "s": _REQUIRED, "p": _REQUIRED,
                            "eps_start": _REQUIRED,
                            "eps_factor": 10 ** (-1 / 7), "count": 8,
                            "N": None, "L": None,
                            "dt": 0.02, "tend": 2000.0, "theta": 1e8,
                            "workers": 1, "out": None, "seed": 0})
    run_dir, report = experiments.experiment_lifespan(
        int(values["dim"]), float(values["gamma"]), float(values["s"]),
        float(values["p"]), float(values["eps_start"]),
        float(values["eps_factor"]), int(values["count"]),
        int(values["N"]) if values["N"] is not None else None,
        float(values["L"]) if values["L"] is not None else None,
        float(values["dt"]), float(values["tend"]), float(values["theta"]),
        int(values["workers"]), values["out"], int(values["seed"]))
    _emit({"run_dir": str(run_dir), **report})
    return 0


def _cmd_phase_diagram(args) -> int:
    values = _merged(args, {"n": _REQUIRED, "s": _REQUIRED,
                            "gamma_min": _REQUIRED, "gamma_max": _REQUIRED,
                            "gamma_steps": _REQUIRED, "p_min": _REQUIRED,
                            "p_max": _REQUIRED, "p_steps": _REQUIRED,
                            "out": None})
    run_dir, report = experiments.experiment_phase_diagram(
        float(values["n"]), float(values["s"]), float(values["gamma_min"]),
        float(values["gamma_max"]), int(values["gamma_steps"]),
        float(values["p_min"]), float(values["p_max"]),
        int(values["p_steps"]), values["out"])
    _emit({"run_dir": str(run_dir), **report})
    return 0


def _cmd_testfn(args) -> int:
    values = _merged(args, {"run": _REQUIRED, "R": _REQUIRED, "out": None})
    radii = _float_list(str(values["R"]))
    run_dir, report = experiments.experiment_testfn(values["run"], radii,
                                                    values["out"])
    _emit({"run_dir": str(run_dir), **report})
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat JSON file mirroring the flags")
    sub.add_argument("--out", help="output root (default CRITEX_OUT or ./runs)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critex",
        description="Numerical laboratory for the damped wave equation with "
                    "low-frequency-flat data: exponent calculus, linear decay "
                    "and diffusion measurements, nonlinear evolution, lifespan "
                    "sweeps, and phase diagrams.")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("exponents", help="thresholds and regime verdict")
    sub.add_argument("--n", type=float)
    sub.add_argument("--gamma", type=float)
    sub.add_argument("--p", type=float)
    sub.add_argument("--s", type=float)
    sub.add_argument("--config")
    sub.set_defaults(handler=_cmd_exponents)

    sub = subs.add_parser("linear-decay", help="radial decay-rate suite")
    for flag in ("--n", "--gamma", "--s", "--t0", "--t1"):
        sub.add_argument(flag, type=float)
    sub.add_argument("--profile", help="powerlaw:a=0.25 or gaussian:w=1.0")
    sub.add_argument("--points", type=int)
    sub.add_argument("--seed", type=int)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_linear_decay)

    sub = subs.add_parser("diffusion", help="damped/heat/difference rate suite")
    for flag in ("--n", "--gamma", "--s", "--t0", "--t1"):
        sub.add_argument(flag, type=float)
    sub.add_argument("--profile")
    sub.add_argument("--points", type=int)
    sub.add_argument("--seed", type=int)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_diffusion)

    sub = subs.add_parser("evolve", help="nonlinear evolution on a periodic grid")
    sub.add_argument("--dim", type=int)
    sub.add_argument("--N", type=int)
    for flag in ("--L", "--p", "--eps", "--gamma", "--s", "--dt", "--tend",
                 "--theta"):
        sub.add_argument(flag, type=float)
    sub.add_argument("--snapshots", type=int,
                     help="store this many physical snapshots for testfn")
    sub.add_argument("--seed", type=int)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_evolve)

    sub = subs.add_parser("lifespan", help="blow-up time sweep over eps")
    sub.add_argument("--dim", type=int)
    sub.add_argument("--N", type=int)
    for flag in ("--L", "--gamma", "--s", "--p", "--eps-start", "--eps-factor",
                 "--dt", "--tend", "--theta"):
        sub.add_argument(flag, type=float)
    sub.add_argument("--count", type=int)
    sub.add_argument("--workers", type=int)
    sub.add_argument("--seed", type=int)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_lifespan)

    sub = subs.add_parser("phase-diagram", help="regime map over (gamma, p)")
    for flag in ("--n", "--s", "--gamma-min", "--gamma-max", "--p-min",
                 "--p-max"):
        sub.add_argument(flag, type=float)
    sub.add_argument("--gamma-steps", type=int)
    sub.add_argument("--p-steps", type=int)
    _add_common(sub)
    sub.set_defaults(handler=_cmd_phase_diagram)

    sub = subs.add_parser("testfn", help="cutoff functional on a stored run")
    sub.add_argument("--run", help="evolve run directory with snapshots")
    sub.add_argument("--R", help="comma-separated scaling radii")
    _add_common(sub)
    sub.set_defaults(handler=_cmd_testfn)

    sub = subs.add_parser("probe", help="propagator entries at (t, r)")
    sub.add_argument("--t", help="time, or comma-separated times")
    sub.add_argument("--r", help="radial frequency, or comma-separated list")
    sub.add_argument("--config")
    sub.set_defaults(handler=_cmd_probe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CritexError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
