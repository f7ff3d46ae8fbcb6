"""engine.cli

Command-line front-end:

    python -m engine verify --N 2 --p 2 --q 3 --xi 0.5 --theta 0.2,-0.4
    python -m engine solve-bae --config runs/n1.json --branch both --out n1.json

Reports go to --out (or stdout); logs go to stderr only.
Exit codes: 0 all checks passed and solves converged, 1 failures recorded in
the report, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .cache import ResultCache
from .config import BRANCHES, COMMANDS, FORMATS, LOG_LEVEL_ENV, STRATEGIES
from .pipeline import exit_code, render, run_text, summary_line
from .schemas import ConfigError, parse_config

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (comments and trailing commas allowed)")
    common.add_argument("--N", type=int, dest="N", help="number of sites")
    common.add_argument("--p", help="K^- parameter p")
    common.add_argument("--q", help="K^+ parameter q")
    common.add_argument("--xi", help="K^+ off-diagonal parameter xi")
    common.add_argument("--theta", help="comma list of inhomogeneities, or 'homogeneous'")
    common.add_argument("--branch", choices=BRANCHES, help="T-Q branch (default both)")
    common.add_argument("--M", help="sector size, or 'default'")
    common.add_argument("--seeds", type=int, dest="seed_count", help="random starts")
    common.add_argument("--rng-seed", type=int, dest="rng_seed", help="base seed (default 0)")
    common.add_argument("--strategy", choices=STRATEGIES, help="Bethe-root solver (default homotopy_xi)")
    common.add_argument("--xi-steps", type=int, dest="xi_steps", help="continuation steps in 10..50")
    common.add_argument("--out", dest="output_path", help="report path (default stdout)")
    common.add_argument("--format", choices=FORMATS, help="json (default) or csv")
    common.add_argument("--no-cache", action="store_true", help="ignore and do not write the result cache")
    common.add_argument(
        "--log-level",
        choices=LOG_LEVELS,
        default=None,
        help=f"stderr log level (default ${LOG_LEVEL_ENV} or WARNING)",
    )

    parser = argparse.ArgumentParser(
        prog="odba",
        description="Open XXX chain with unparallel boundary fields: identity checks, spectra and Bethe roots.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "check the algebraic identity catalog and the reference-state relations",
        "spectrum": "eigenvalue polynomials of the transfer matrix by exact diagonalization",
        "solve-bae": "solve the Bethe equations and match energies to the exact spectrum",
        "solve-functional": "solve the functional relations for Lambda(u) directly",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def configure_logging(level: Optional[str]) -> None:
    name = (level or os.environ.get(LOG_LEVEL_ENV) or "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    keys = ("command", "N", "p", "q", "xi", "theta", "branch", "M", "seed_count", "rng_seed",
            "strategy", "xi_steps", "output_path", "format")
    out = {k: getattr(args, k, None) for k in keys}
    if args.no_cache:
        out["use_cache"] = False
    return out


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        config = parse_config(args.config, overrides=overrides_from_args(args))
    except ConfigError as e:
        print(f"config error [{e.field}]: {e}", file=sys.stderr)
        return 2

    report, text = run_text(config, cache=ResultCache())
    body = render(report, config.format, text)
    if config.output_path:
        Path(config.output_path).write_text(body, encoding="utf-8")
        logger.info("report written to %s", config.output_path)
    else:
        sys.stdout.write(body if body.endswith("\n") else body + "\n")
    print(summary_line(report), file=sys.stderr)
    return exit_code(report)
