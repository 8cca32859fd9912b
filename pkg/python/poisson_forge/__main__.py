"""
Poisson-Forge Command Line Interface

This module provides the command-line interface for running one problem
descriptor. Run with: poisson-forge [FILE] or python -m poisson_forge [FILE]
"""

import argparse
import logging
import sys

from typing import Optional, Sequence

from .config import ConfigError, load_config
from .pipeline import Report, run_problem


def _read_input(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-forge",
        description="Check Poisson algebra properties described by a JSON problem",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  poisson-forge tests/fixtures/classify_monomial_index_two.json
  poisson-forge --seed 7 --trials 200 problem.json
  cat problem.json | poisson-forge --order lex

Exit codes:
  0  property holds or value computed
  1  property fails (the report carries the counterexample)
  2  input, schema or usage error
        """,
    )

    parser.add_argument(
        "file", nargs="?", help="Descriptor file (reads stdin when omitted or '-')"
    )

    parser.add_argument("--seed", type=int, help="Seed for pseudo-random sampling")

    parser.add_argument(
        "--bound", type=int, dest="degree_bound", help="Degree bound for sampling"
    )

    parser.add_argument("--trials", type=int, help="Number of random trials")

    parser.add_argument(
        "--order", choices=["grevlex", "grlex", "lex"], help="Monomial order"
    )

    parser.add_argument("--config", help="Path to YAML configuration file")

    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
        help="Set logging level",
    )

    return parser


def main(argv: Optional[Sequence[str]] = None) -> None:
    """Command-line interface for poisson-forge."""
    args = build_parser().parse_args(argv)

    # Logs go to stderr; stdout carries only the report
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )

    indent = 2
    try:
        config = load_config(args.config)
        indent = config.indent
        overrides = {
            "seed": args.seed,
            "degree_bound": args.degree_bound,
            "trials": args.trials,
            "order": args.order,
        }
        report = run_problem(_read_input(args.file), overrides, config)

    except ConfigError as e:
        logging.error(f"Configuration failed: {e}")
        report = Report("error", {}, [f"Configuration failed: {e}"])
    except OSError as e:
        logging.error(f"Cannot read descriptor: {e}")
        report = Report("error", {}, [f"Cannot read descriptor: {e}"])
    except KeyboardInterrupt:
        logging.info("Interrupted by user")
        sys.exit(2)
    except Exception as e:
        logging.error(f"Unexpected error: {e}")
        report = Report("error", {}, [f"Unexpected error: {type(e).__name__}: {e}"])

    print(report.to_json(indent))
    sys.exit(report.exit_code)


if __name__ == "__main__":
    main()
