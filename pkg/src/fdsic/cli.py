"""Command line front end for the simulation campaigns."""

import argparse
import sys
from dataclasses import replace

from .calibration import run_validation
from .config import ScenarioConfig, load_config
from .harness import run_experiment
from .linkbudget import ideal_sinr_db


def _add_common(parser):
    parser.add_argument("--config", help="scenario file (INI sections)")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--trials", type=int, help="trials per grid point")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument(
        "--variants",
        help="comma-separated canceller list (e.g. ref-rx,widely-linear)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdsic",
        description="Full-duplex self-interference cancellation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    budget = sub.add_parser("budget", help="analytic power budget sweep")
    ptx = sub.add_parser("sinr-ptx", help="waveform SINR versus transmit power")
    n_sweep = sub.add_parser("sinr-n", help="waveform SINR versus estimation size")
    validate = sub.add_parser("validate", help="impairment model self-checks")
    for p in (budget, ptx, n_sweep, validate):
        _add_common(p)
    return parser


_EXPERIMENT_BY_COMMAND = {
    "budget": "budget-sweep",
    "sinr-ptx": "sinr-vs-ptx",
    "sinr-n": "sinr-vs-n",
}


def _configure(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    overrides = {"experiment": _EXPERIMENT_BY_COMMAND[args.command]}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["n_trials"] = args.trials
    if args.out is not None:
        overrides["output"] = args.out
    if args.variants is not None:
        overrides["variants"] = tuple(
            v.strip() for v in args.variants.split(",") if v.strip()
        )
    return replace(cfg, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "validate":
        cfg = load_config(args.config) if args.config else ScenarioConfig()
        checks = run_validation(cfg.transceiver)
        failed = 0
        for check in checks:
            status = "PASS" if check.passed else "FAIL"
            failed += 0 if check.passed else 1
            print(
                f"{status}  {check.name:24s} measured {check.measured_db:10.4f} dB"
                f"  expected {check.expected_db:10.4f} dB"
                f"  tolerance {check.tolerance_db:g} dB"
            )
        print(f"{len(checks) - failed}/{len(checks)} checks passed")
        return 1 if failed else 0

    try:
        cfg = _configure(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    print(f"run ideal SINR: {ideal_sinr_db(cfg.transceiver):.3f} dB")
    try:
        rows = run_experiment(cfg, progress=lambda msg: print(msg, flush=True))
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"{len(rows)} rows -> {cfg.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
