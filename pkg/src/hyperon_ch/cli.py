"""Command-line surface.

Angles are taken in degrees and converted to radians internally.  Every
command accepts --seed where randomness is involved and is bit-reproducible
for a fixed invocation; there is deliberately no environment override for
the seed.  Exit codes: 0 success, 2 configuration error, 3 under-powered
statistics.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .ch_inequality import CHSettings, coplanar_lhs, maximize_violation
from .event_generator import (
    CHEstimate,
    GeneratorConfig,
    UnderPoweredError,
    analyze_events,
    export_events,
    read_events_csv,
    run_experiment,
)
from .lhv_models import MODEL_NAMES, bundled_model, verify_ch
from .quantum_model import ALPHA_DEFAULT
from .spacelike import BETA_DEFAULT, critical_beta, mixed_bound, spacelike_fraction_mc

DEFAULT_SEED = 1
DEFAULT_EVENTS = 1_000_000
DEFAULT_CONE_DEG = 10.0


def _write_output(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _flatten(prefix: str, value, row: dict[str, str]) -> None:
    if isinstance(value, dict):
        for key, sub in value.items():
            _flatten(f"{prefix}.{key}" if prefix else key, sub, row)
    elif isinstance(value, (list, tuple)):
        row[prefix] = ";".join(str(v) for v in value)
    else:
        row[prefix] = repr(value) if isinstance(value, float) else str(value)


def _emit_summary(command: str, seed, config: dict, result: dict, started: float, args) -> None:
    summary = {
        "command": command,
        "version": __version__,
        "seed": None if seed is None else int(seed),
        "config": config,
        "result": result,
        "wall_time_s": time.perf_counter() - started,
    }
    if getattr(args, "format", "json") == "csv":
        row: dict[str, str] = {}
        _flatten("", result, row)
        header = ",".join(row)
        values = ",".join(row.values())
        _write_output(f"{header}\n{values}\n", args.out)
    else:
        _write_output(json.dumps(summary, indent=2), args.out)


def _settings_from_args(args) -> CHSettings:
    directions = [getattr(args, name, None) for name in ("n1", "n1p", "n2", "n2p")]
    if any(d is not None for d in directions):
        if not all(d is not None for d in directions):
            raise ValueError("give all four of --n1/--n1p/--n2/--n2p or none")
        return CHSettings(*(_parse_vec(d) for d in directions))
    return CHSettings.coplanar(math.radians(args.theta_deg))


def _parse_vec(text: str) -> np.ndarray:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected 'x,y,z', got {text!r}")
    return np.asarray(parts)


def _estimate_result(estimate: CHEstimate) -> dict:
    return {
        "table": estimate.table.as_dict(),
        "value": estimate.value,
        "stderr": estimate.stderr,
        "z_score": estimate.z_score,
        "n_used": estimate.n_used,
        "counts": [int(c) for c in estimate.counts],
    }


def _add_settings_args(sub) -> None:
    sub.add_argument("--theta-deg", type=float, default=45.0,
                     help="coplanar settings angle (default: 45)")
    for name in ("n1", "n1p", "n2", "n2p"):
        sub.add_argument(f"--{name}", help=f"explicit direction {name} as 'x,y,z'")


def _add_io_args(sub) -> None:
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--out", default="-", help="output path, '-' for stdout")


def cmd_curve(args) -> int:
    if args.steps < 2:
        raise ValueError("need at least 2 steps")
    thetas = np.linspace(args.theta_min, args.theta_max, args.steps)
    lhs = coplanar_lhs(np.radians(thetas), args.alpha)
    bound = mixed_bound(args.alpha, args.beta)
    lines = ["theta_deg,lhs,bound_zero,bound_mixed"]
    for t, v in zip(thetas, lhs):
        lines.append(f"{t:.17g},{v:.17g},0,{bound:.17g}")
    _write_output("\n".join(lines) + "\n", args.out)
    return 0


def cmd_mc(args) -> int:
    started = time.perf_counter()
    settings = _settings_from_args(args)
    cone = math.radians(args.cone_deg)
    if args.events_in:
        events = read_events_csv(args.events_in)
        estimate = analyze_events(events, settings, args.alpha, cone,
                                  spacelike_only=args.spacelike_only)
        config = {
            "events_in": args.events_in,
            "alpha": args.alpha,
            "cone_deg": args.cone_deg,
            "spacelike_only": args.spacelike_only,
            "settings": _settings_dict(settings),
        }
        _emit_summary("mc", None, config, _estimate_result(estimate), started, args)
        return 0
    config = GeneratorConfig(
        n_events=args.events,
        seed=args.seed,
        alpha=args.alpha,
        beta=args.beta,
        cone_half_angle=cone,
        efficiency=args.efficiency,
        spacelike_only=args.spacelike_only,
    )
    if args.export_events:
        export_events(config, args.export_events)
    estimate = run_experiment(config, settings, threads=args.threads)
    config_dict = {
        "n_events": config.n_events,
        "alpha": config.alpha,
        "beta": config.beta,
        "cone_deg": args.cone_deg,
        "efficiency": config.efficiency,
        "spacelike_only": config.spacelike_only,
        "settings": _settings_dict(settings),
    }
    _emit_summary("mc", config.seed, config_dict, _estimate_result(estimate), started, args)
    return 0


def _settings_dict(settings: CHSettings) -> dict:
    return {
        "n1": settings.n1.tolist(),
        "n1p": settings.n1p.tolist(),
        "n2": settings.n2.tolist(),
        "n2p": settings.n2p.tolist(),
    }


def cmd_lhv(args) -> int:
    started = time.perf_counter()
    settings = _settings_from_args(args)
    model = bundled_model(args.model, alpha=args.alpha)
    value, stderr = verify_ch(model, settings, args.samples, args.seed)
    config = {
        "model": args.model,
        "alpha": args.alpha,
        "samples": args.samples,
        "settings": _settings_dict(settings),
    }
    result = {"value": value, "stderr": stderr, "satisfied": bool(value <= 3.0 * stderr)}
    _emit_summary("lhv", args.seed, config, result, started, args)
    return 0


def cmd_optimize(args) -> int:
    started = time.perf_counter()
    settings, value = maximize_violation(
        args.alpha, grid_step=math.radians(args.grid_deg), refine_tol=args.tol
    )
    config = {"alpha": args.alpha, "grid_deg": args.grid_deg, "tol": args.tol}
    result = {"value": value, "settings": _settings_dict(settings)}
    _emit_summary("optimize", None, config, result, started, args)
    return 0


def cmd_spacelike(args) -> int:
    started = time.perf_counter()
    estimate, stderr = spacelike_fraction_mc(args.beta, args.n, args.seed)
    config = {"beta": args.beta, "n": args.n}
    result = {
        "fraction_analytic": args.beta,
        "fraction_mc": estimate,
        "stderr": stderr,
        "critical_beta": critical_beta(),
    }
    _emit_summary("spacelike", args.seed, config, result, started, args)
    return 0


def cmd_yield(args) -> int:
    started = time.perf_counter()
    for name, rate in (("br1", args.br1), ("br2", args.br2), ("efficiency", args.efficiency)):
        if not (0.0 <= rate <= 1.0):
            raise ValueError(f"{name} must lie in [0, 1], got {rate}")
    if args.n_parent < 0:
        raise ValueError("n_parent must be nonnegative")
    expected = args.n_parent * args.br1 * args.br2 * args.br2 * args.efficiency
    config = {
        "n_parent": args.n_parent,
        "br1": args.br1,
        "br2": args.br2,
        "efficiency": args.efficiency,
    }
    _emit_summary("yield", None, config, {"expected_pairs": expected}, started, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperon-ch",
        description="CH inequality tests with simulated hyperon pair decays",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="coplanar violation curve as CSV")
    p.add_argument("--alpha", type=float, default=ALPHA_DEFAULT)
    p.add_argument("--beta", type=float, default=BETA_DEFAULT)
    p.add_argument("--theta-min", type=float, default=0.0)
    p.add_argument("--theta-max", type=float, default=90.0)
    p.add_argument("--steps", type=int, default=91)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="accepted for interface uniformity; the curve is deterministic")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("mc", help="simulated experiment and CH estimate")
    p.add_argument("--alpha", type=float, default=ALPHA_DEFAULT)
    p.add_argument("--beta", type=float, default=BETA_DEFAULT)
    p.add_argument("--events", type=int, default=DEFAULT_EVENTS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--cone-deg", type=float, default=DEFAULT_CONE_DEG)
    p.add_argument("--efficiency", type=float, default=1.0)
    p.add_argument("--spacelike-only", action="store_true",
                   help="analyze only space-like separated pairs")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--export-events", metavar="PATH", help="also write events as CSV")
    p.add_argument("--events-in", metavar="PATH", help="re-analyze an event CSV instead of generating")
    _add_settings_args(p)
    _add_io_args(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("lhv", help="CH value of a local hidden variable model")
    p.add_argument("--model", choices=MODEL_NAMES, default="linear_spin")
    p.add_argument("--alpha", type=float, default=ALPHA_DEFAULT)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_settings_args(p)
    _add_io_args(p)
    p.set_defaults(func=cmd_lhv)

    p = sub.add_parser("optimize", help="search settings for the maximal violation")
    p.add_argument("--alpha", type=float, default=ALPHA_DEFAULT)
    p.add_argument("--grid-deg", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="accepted for interface uniformity; the search is deterministic")
    _add_io_args(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("spacelike", help="space-like separation fraction")
    p.add_argument("--beta", type=float, default=BETA_DEFAULT)
    p.add_argument("--n", type=int, default=DEFAULT_EVENTS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_io_args(p)
    p.set_defaults(func=cmd_spacelike)

    p = sub.add_parser("yield", help="expected usable pair count from branching ratios")
    p.add_argument("--n-parent", type=float, required=True)
    p.add_argument("--br1", type=float, required=True)
    p.add_argument("--br2", type=float, required=True)
    p.add_argument("--efficiency", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="accepted for interface uniformity; the arithmetic is deterministic")
    _add_io_args(p)
    p.set_defaults(func=cmd_yield)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnderPoweredError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
