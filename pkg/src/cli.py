#!/usr/bin/env python3
"""Command-line entry point: curve sweeps, point queries and MC verification.

Exit status is 0 on success, 1 when a verification check fails, 2 for
invalid arguments or unwritable files and 3 for numeric failures.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from src.config import get_settings
from src.models import (
    ChannelParams,
    Direction,
    MonteCarloSpec,
    ScenarioTag,
    SweepSpec,
    SweepVariable,
)
from src.services.bounds_core import bound, independent_outage
from src.services.copulas import build_achieving_coupling, plan_histogram
from src.services.marginals import transform
from src.services.montecarlo import REFERENCE_CHECKPOINTS, verify_point
from src.services.rates import eps_outage_rate
from src.services.rayleigh import (
    LimitVariant,
    diversity_estimate,
    eve_snr_threshold_db,
    high_snr_threshold_db,
    limit_rs0,
)
from src.services.sweep import read_sweep_file, run_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERIC = 3


def _direction(text: str) -> Direction:
    if text == "independent":
        return Direction.INDEPENDENT
    try:
        return Direction(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid direction: {text!r}") from e


def _add_channel_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scenario",
        type=ScenarioTag,
        choices=list(ScenarioTag),
        default=ScenarioTag.CSIT,
        metavar="{" + ",".join(tag.value for tag in ScenarioTag) + "}",
        help="Outage event definition (default: csit)",
    )
    parser.add_argument("--snr-bob", type=float, default=0.0, help="Bob SNR in dB (default: 0)")
    parser.add_argument("--snr-eve", type=float, default=0.0, help="Eve SNR in dB (default: 0)")
    parser.add_argument("--lx", type=float, default=1.0, help="Inverse mean of Bob's gain")
    parser.add_argument("--ly", type=float, default=1.0, help="Inverse mean of Eve's gain")
    parser.add_argument("--rs", type=float, default=0.0, help="Secrecy rate in bits/use")
    parser.add_argument("--rd", type=float, default=0.0, help="Dummy rate in bits/use")


def _add_mc_arguments(parser: argparse.ArgumentParser) -> None:
    settings = get_settings()
    parser.add_argument("--mc-samples", type=int, default=None, help="Monte Carlo draws")
    parser.add_argument(
        "--seed", type=int, default=None, help=f"Root seed (default: {settings.MC_DEFAULT_SEED})"
    )
    parser.add_argument(
        "--atoms",
        type=int,
        default=settings.MC_DEFAULT_ATOMS,
        help=f"Atoms per axis of coupling plans (default: {settings.MC_DEFAULT_ATOMS})",
    )


def build_parser(sweep_defaults: dict[str, object] | None = None) -> argparse.ArgumentParser:
    """Argument parser with the sweep, query, verify and coupling subcommands.

    Args:
        sweep_defaults: Overrides for sweep flag defaults, keyed by destination
            name (e.g. from a key=value config file).

    Raises:
        ValueError: If a default names no sweep flag.
    """
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="secrecy-bounds",
        description="Best- and worst-case secrecy outage over all fading dependencies",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    parser.add_argument("--config", type=Path, help="key=value file with sweep settings")
    commands = parser.add_subparsers(dest="command", required=True)

    sweep = commands.add_parser("sweep", help="Write a curve data column file")
    sweep.add_argument(
        "--variable",
        type=SweepVariable,
        choices=list(SweepVariable),
        default=SweepVariable.SNR_BOB_DB,
        metavar="{" + ",".join(v.value for v in SweepVariable) + "}",
        help="Swept quantity (default: snr_bob_db)",
    )
    sweep.add_argument("--start", type=float, default=-5.0, help="First sweep value")
    sweep.add_argument("--stop", type=float, default=15.0, help="Last sweep value")
    sweep.add_argument(
        "--points", type=int, default=settings.SWEEP_DEFAULT_POINTS, help="Sweep points"
    )
    sweep.add_argument("--events", action="store_true", help="Add probE2 and probE3 columns")
    sweep.add_argument("--out", type=Path, default=None, help="Output file")
    _add_channel_arguments(sweep)
    _add_mc_arguments(sweep)
    if sweep_defaults:
        _set_sweep_defaults(sweep, sweep_defaults)

    query = commands.add_parser("query", help="Evaluate a single point")
    query.add_argument("kind", choices=["bound", "threshold", "rate", "limit", "diversity"])
    query.add_argument(
        "--direction", type=_direction, default=Direction.LOWER, help="lower, upper or indep"
    )
    query.add_argument(
        "--curve", type=_direction, default=None, help="Curve for rate queries (lower/upper/indep)"
    )
    query.add_argument("--eps", type=float, default=None, help="Outage target for rate queries")
    query.add_argument(
        "--grid",
        type=float,
        nargs=2,
        default=(20.0, 60.0),
        metavar=("START_DB", "STOP_DB"),
        help="Bob SNR range of diversity queries (default: 20 60)",
    )
    _add_channel_arguments(query)

    verify = commands.add_parser("verify", help="Run the Monte Carlo concordance checks")
    _add_mc_arguments(verify)

    coupling = commands.add_parser("coupling", help="Write the joint density of a coupling plan")
    coupling.add_argument("--direction", type=_direction, default=Direction.LOWER)
    coupling.add_argument("--bins", type=int, default=100, help="Histogram bins per axis")
    coupling.add_argument("--max-gain", type=float, default=5.0, help="Histogram range upper end")
    coupling.add_argument("--out", type=Path, required=True, help="Output file")
    _add_channel_arguments(coupling)
    _add_mc_arguments(coupling)

    return parser


def _set_sweep_defaults(sweep: argparse.ArgumentParser, values: dict[str, object]) -> None:
    dests = {action.dest for action in sweep._actions}
    unknown = sorted(set(values) - dests)
    if unknown:
        raise ValueError(f"Unknown sweep settings: {', '.join(unknown)}")
    if isinstance(values.get("events"), str):
        values = {**values, "events": values["events"].lower() in ("1", "true", "yes")}
    sweep.set_defaults(**values)


def _read_config(argv: list[str] | None) -> dict[str, object]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path)
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return {}
    values = read_sweep_file(known.config)
    logger.info(f"Loaded {len(values)} sweep settings from {known.config}")
    return dict(values)


def _params(args: argparse.Namespace) -> ChannelParams:
    return ChannelParams.from_db(
        args.snr_bob,
        args.snr_eve,
        lambda_x=args.lx,
        lambda_y=args.ly,
        rate_s=args.rs,
        rate_d=args.rd,
    )


def _emit(**fields) -> None:
    print(" ".join(f"{name}={value}" for name, value in fields.items()))


def _run_sweep(args: argparse.Namespace) -> int:
    if args.out is None:
        raise ValueError("sweep requires --out (or out= in the config file)")
    mc = None
    if args.mc_samples is not None:
        mc = MonteCarloSpec(n_samples=args.mc_samples, seed=args.seed, n_atoms=args.atoms)
    spec = SweepSpec(
        variable=args.variable,
        start=args.start,
        stop=args.stop,
        points=args.points,
        fixed=_params(args),
        scenario=args.scenario,
        mc=mc,
        events=args.events,
    )
    path = run_sweep(spec, args.out)
    print(f"Wrote {spec.points} rows to {path}")
    return EXIT_OK


def _run_query(args: argparse.Namespace) -> int:
    if args.kind == "threshold":
        _emit(
            threshold_db=eve_snr_threshold_db(args.lx, args.ly, args.snr_bob, args.rs),
            high_snr_db=high_snr_threshold_db(args.lx, args.ly, args.snr_bob, args.rs),
        )
        return EXIT_OK

    params = _params(args)
    if args.kind == "bound":
        pair = transform(params)
        if args.direction is Direction.INDEPENDENT:
            _emit(value=independent_outage(args.scenario, pair))
        else:
            result = bound(args.scenario, args.direction, pair)
            _emit(value=result.value, branch=result.branch.value)
    elif args.kind == "rate":
        if args.eps is None:
            raise ValueError("query rate requires --eps")
        curve = args.curve or args.direction
        solution = eps_outage_rate(curve, args.scenario, params, args.eps)
        _emit(
            rate=solution.rate_s,
            achieved_eps=solution.achieved_eps,
            iterations=solution.iterations,
        )
    elif args.kind == "limit":
        _emit(limit=limit_rs0(LimitVariant.of(args.scenario, args.direction), params))
    else:
        start, stop = args.grid
        grid = np.linspace(start, stop, 41)
        _emit(diversity=diversity_estimate(args.scenario, args.direction, params, grid))
    return EXIT_OK


def _run_verify(args: argparse.Namespace) -> int:
    settings = get_settings()
    n_samples = args.mc_samples or settings.MC_DEFAULT_SAMPLES
    seed = settings.MC_DEFAULT_SEED if args.seed is None else args.seed

    failures = 0
    for index, (scenario, params) in enumerate(REFERENCE_CHECKPOINTS):
        for record in verify_point(scenario, params, n_samples, seed, args.atoms, (index,)):
            failures += not record.passed
            _emit(
                point=index,
                scenario=scenario.value,
                curve=record.direction.value,
                analytic=f"{record.analytic:.10g}",
                mc=f"{record.estimate.mean:.10g}",
                std_error=f"{record.estimate.std_error:.3g}",
                status="pass" if record.passed else "FAIL",
            )
    print(f"{failures} of {3 * len(REFERENCE_CHECKPOINTS)} checks failed")
    return EXIT_CHECK_FAILED if failures else EXIT_OK


def _run_coupling(args: argparse.Namespace) -> int:
    params = _params(args)
    plan = build_achieving_coupling(transform(params), args.scenario, args.direction, args.atoms)
    x, y, density = plan_histogram(plan, params, bins=args.bins, gain_range=(0.0, args.max_gain))
    with open(args.out, "w", encoding="utf-8", newline="\n") as f:
        f.write("x y density\n")
        for i, xc in enumerate(x):
            for j, yc in enumerate(y):
                f.write(f"{xc:.10g} {yc:.10g} {density[i, j]:.10g}\n")
    print(f"Wrote {args.bins}x{args.bins} histogram to {args.out}")
    return EXIT_OK


HANDLERS = {
    "sweep": _run_sweep,
    "query": _run_query,
    "verify": _run_verify,
    "coupling": _run_coupling,
}


def main(argv: list[str] | None = None) -> int:
    settings = get_settings()

    try:
        parser = build_parser(_read_config(argv))
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID

    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        return HANDLERS[args.command](args)
    except ArithmeticError as e:
        logger.error(f"Numeric failure in {args.command}", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
