"""Command-line entry point."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from src.config import AppConfig, get_config, set_config
from src.harness.compare import compare_runs, emit_comparison
from src.harness.report import load_report
from src.harness.runner import run_and_emit, run_suite

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)


def parse_gate(value: str) -> tuple[str, float]:
    """Parse ``mode:threshold``, e.g. ``euclidean:500``."""
    mode, sep, threshold = value.partition(":")
    if not sep or mode not in ("pseudo", "euclidean", "mahalanobis"):
        raise argparse.ArgumentTypeError(
            f"Expected <pseudo|euclidean|mahalanobis>:<threshold>, got {value!r}"
        )
    try:
        return mode, float(threshold)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid gate threshold: {threshold!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmb-birth",
        description="Multi-sensor LMB tracking with adaptive Gibbs birth",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run one seeded experiment")
    run.add_argument(
        "--config", type=Path, default=None, help="YAML config (default: ./config.yaml)"
    )
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--preprune", action="store_true", help="Pre-prune associated measurements")
    run.add_argument("--gate", type=parse_gate, default=None, metavar="MODE:THRESH")
    run.add_argument("--memoize", action="store_true", help="Memoize psi-bar per tuple")
    run.add_argument("--prune-cap", action="store_true", help="Prune and cap the birth LMB")
    run.add_argument(
        "--skip-miss", type=int, default=None, metavar="K", help="Skip tuples with > K misses"
    )
    run.add_argument("--all-on", action="store_true", help="Enable every mechanism")
    run.add_argument("--out", type=Path, default=None, help="Report directory")

    compare = sub.add_parser("compare", help="Compare emitted runs against a baseline")
    compare.add_argument("--baseline", type=Path, required=True)
    compare.add_argument("--candidates", type=Path, nargs="+", required=True)
    compare.add_argument("--out", type=Path, required=True)
    compare.add_argument("--start", type=int, default=0, help="First step counted")

    suite = sub.add_parser("suite", help="Baseline, each mechanism alone, and all on")
    suite.add_argument("--config", type=Path, default=None)
    suite.add_argument("--seed", type=int, default=None)
    suite.add_argument("--out", type=Path, default=Path("runs/suite"))
    suite.add_argument("--start", type=int, default=0, help="First step counted")
    return parser


def load_config(path: Path | None) -> AppConfig:
    if path is None:
        return get_config()
    config = AppConfig.from_yaml(path)
    set_config(config)
    return config


def apply_run_flags(config: AppConfig, args: argparse.Namespace) -> AppConfig:
    """Overlay ``run`` flags onto the loaded configuration."""
    toggles: dict[str, Any] = config.toggles.as_dict()
    birth: dict[str, Any] = {}
    scenario: dict[str, Any] = {}
    output: dict[str, Any] = {}

    if args.all_on:
        toggles = {name: True for name in toggles}
    if args.preprune:
        toggles["preprune"] = True
    if args.gate is not None:
        toggles["gate"] = True
        birth["gate_mode"], birth["gate_threshold"] = args.gate
    if args.memoize:
        toggles["memoize"] = True
    if args.prune_cap:
        toggles["prune_cap"] = True
    if args.skip_miss is not None:
        toggles["skip_miss"] = True
        birth["max_missed"] = args.skip_miss
    if args.seed is not None:
        scenario["seed"] = args.seed
    if args.out is not None:
        output["dir"] = args.out
        output["label"] = args.out.name

    return config.with_updates(toggles=toggles, birth=birth, scenario=scenario, output=output)


def _configure_logging(level: str) -> None:
    log_level = getattr(logging, level.upper(), logging.INFO)
    logging.getLogger().setLevel(log_level)


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s · %(levelname)s · %(name)s · %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    args = build_parser().parse_args(argv)

    try:
        if args.command == "run":
            config = apply_run_flags(load_config(args.config), args)
            _configure_logging(config.logging.level)
            run_and_emit(config)
        elif args.command == "compare":
            baseline = load_report(args.baseline)
            candidates = [load_report(path) for path in args.candidates]
            rows = compare_runs(baseline, candidates, start=args.start)
            emit_comparison(rows, args.out)
        else:
            config = load_config(args.config)
            if args.seed is not None:
                config = config.with_updates(scenario={"seed": args.seed})
            _configure_logging(config.logging.level)
            run_suite(config, args.out, start=args.start)
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return 130
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
