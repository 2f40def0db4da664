"""Command line entry point.

Subcommands mirror the pipeline stages (synth | frontend | rdm | rsa |
report | all). Configuration comes from an optional JSON file; individual
flags override fields from it. Worker count resolution order:
--workers flag, then the CHROMA_RSA_WORKERS environment variable, then the
config file, then the logical CPU count.
"""
from __future__ import annotations

import argparse
import os
import sys
import traceback

from .config import StudyConfig
from .errors import ChromaRsaError, ConfigError
from .pipeline import cmd_all, cmd_frontend, cmd_rdm, cmd_report, cmd_rsa, \
    cmd_synth

WORKERS_ENV = "CHROMA_RSA_WORKERS"

_COMMANDS = {
    "synth": cmd_synth,
    "frontend": cmd_frontend,
    "rdm": cmd_rdm,
    "rsa": cmd_rsa,
    "report": cmd_report,
    "all": cmd_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chroma-rsa",
        description="Representational similarity analysis of auditory "
                    "front-ends over a synthetic instrument bank.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__ or name)
        p.add_argument("--config", metavar="PATH",
                       help="JSON study configuration file")
        p.add_argument("--seed", type=int, metavar="N",
                       help="random seed (required for 'all'; overrides config)")
        p.add_argument("--out", metavar="DIR",
                       help="output directory (overrides config)")
        p.add_argument("--workers", type=int, metavar="N",
                       help="parallel workers; 0 means logical CPU count")
        p.add_argument("--alpha", type=float, metavar="F",
                       help="familywise significance level (overrides config)")
    return parser


def _env_workers():
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"{WORKERS_ENV} must be >= 0, got {value}")
    return value


def resolve_config(args: argparse.Namespace) -> StudyConfig:
    """Merge config file, environment, and flags into one StudyConfig."""
    if args.config is not None:
        base = StudyConfig.from_json_file(args.config)
    else:
        if args.seed is None:
            raise ConfigError("--seed is required when no --config file is given")
        base = StudyConfig(seed=args.seed)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    env_workers = _env_workers()
    if env_workers is not None:
        overrides["workers"] = env_workers
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.command == "all" and args.seed is None:
        raise ConfigError("'all' requires an explicit --seed for reproducibility")
    return base.replace(**overrides) if overrides else base


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        _COMMANDS[args.command](config)
    except ChromaRsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception:
        traceback.print_exc()
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
