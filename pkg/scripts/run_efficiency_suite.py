#!/usr/bin/env python3
"""Run baseline, each efficiency mechanism alone, and all on; print the comparison table."""

import logging
import sys
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.config import AppConfig, get_config
from src.harness.compare import format_comparison
from src.harness.runner import run_suite


def main() -> None:
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s · %(levelname)s · %(name)s · %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    config = AppConfig.from_yaml(sys.argv[1]) if len(sys.argv) > 1 else get_config()
    out_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("runs/suite")

    print(f"Running efficiency suite (seed {config.scenario.seed}) into {out_dir}...")
    rows = run_suite(config, out_dir)
    print()
    print(format_comparison(rows))


if __name__ == "__main__":
    main()
