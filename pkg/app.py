import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

# Add src directory to Python path for imports
current_dir = Path(__file__).parent
src_dir = current_dir / "src"
sys.path.insert(0, str(src_dir))
sys.path.insert(0, str(current_dir))

from commands import EXIT_CONFIG, analyze, selftest, sweep, td  # noqa: E402
from utils.config import Config, SweepAxis  # noqa: E402
from utils.errors import ConfigError  # noqa: E402

LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncphase",
        description="Entanglement of oscillators in noncommutative phase space",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value settings file")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--threads", type=int, help="worker threads (default: $NCPHASE_THREADS or 1)")
    common.add_argument("--seed", type=int, help="random seed for randomized checks")

    subparsers.add_parser("analyze", parents=[common], help="single-point JSON report")

    sweep_parser = subparsers.add_parser("sweep", parents=[common], help="separability phase diagram (CSV)")
    sweep_parser.add_argument("--param", action="append", default=[], help="parameter to sweep (repeatable)")
    sweep_parser.add_argument("--range", action="append", default=[], dest="ranges",
                              help="START:STOP:COUNT for the matching --param")

    td_parser = subparsers.add_parser("td", parents=[common], help="time-dependent isotropic trajectory (CSV)")
    td_parser.add_argument("--dt", type=float, help="time step")
    td_parser.add_argument("--t-end", type=float, dest="t_end", help="end of the time window")

    selftest_parser = subparsers.add_parser("selftest", parents=[common], help="run the invariant suites")
    selftest_parser.add_argument("--mutate", action="store_true", help="inject a covariance sign defect")
    return parser


def parse_axes(params: List[str], ranges: List[str]) -> List[SweepAxis]:
    if len(params) != len(ranges):
        raise ConfigError("every --param needs a matching --range")
    if len(params) > 2:
        raise ConfigError("at most two --param/--range pairs")
    return [SweepAxis.parse(name, spec) for name, spec in zip(params, ranges)]


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    logger = logging.getLogger("ncphase")

    try:
        config = Config(args.config)
        config.update_settings({
            "out": args.out,
            "threads": args.threads,
            "seed": args.seed,
            "dt": getattr(args, "dt", None),
            "t_end": getattr(args, "t_end", None),
        })
        axes = parse_axes(getattr(args, "param", []), getattr(args, "ranges", []))
        run_config = config.to_run_config(axes)
    except (ConfigError, ValueError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    logger.debug(f"Settings: {config.export_settings()}")
    if args.command == "analyze":
        return analyze.run(run_config)
    if args.command == "sweep":
        return sweep.run(run_config)
    if args.command == "td":
        return td.run(run_config)
    return selftest.run(run_config, mutate=args.mutate)


if __name__ == "__main__":
    sys.exit(main())
