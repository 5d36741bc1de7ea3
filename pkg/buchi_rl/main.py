import argparse
import sys
from typing import Optional

from buchi_rl.cli import commands
from buchi_rl.cli.config_io import PRESETS, build_config, load_config, preset_config
from buchi_rl.cli.schemas import ExperimentConfig
from buchi_rl.config import get_settings
from buchi_rl.errors import BuchiRLError
from buchi_rl.log import configure_logging

COMMANDS = ("train", "sweep", "eval", "oracle-check", "export-prism", "compare")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="buchi-rl",
        description="Learn and model-check policies for LTL objectives.",
    )
    parser.add_argument("command", choices=COMMANDS)
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--config", help="flat key = value experiment file")
    source.add_argument("--preset", choices=sorted(PRESETS))
    parser.add_argument("--seed", type=int, help="run this single seed")
    parser.add_argument("--out", help="output directory (or file for export-prism)")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--jsonl", action="store_true", help="also dump the chain as JSON lines")
    parser.add_argument("--log-level", default=None)
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        config = load_config(args.config)
    elif args.preset:
        config = preset_config(args.preset)
    else:
        config = build_config({})
    overrides: dict = {}
    if args.seed is not None:
        overrides["seeds"] = [args.seed]
    if args.out and args.command != "export-prism":
        overrides["output_dir"] = args.out
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        config = build_config({**config.model_dump(), **overrides})
    return config


def run(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.command == "train":
        for record in commands.cmd_train(config):
            print(
                f"seed {record.seed}: final {record.final_satisfaction:.4f} "
                f"(optimal {record.optimal:.4f})"
            )
    elif args.command == "sweep":
        for point, median, iqr in commands.cmd_sweep(config):
            print(f"{point}: median {median:.4f} iqr {iqr:.4f}")
    elif args.command == "eval":
        report = commands.cmd_eval(config)
        print(f"satisfaction_probability {report.satisfaction:.10f}")
        print(f"expected_discounted_reward {report.discounted_reward:.10f}")
        print(f"optimal {report.optimal:.10f}")
    elif args.command == "oracle-check":
        report = commands.cmd_oracle_check(config)
        print(f"{report.agreements}/{report.samples} lassos agree")
        for line in report.disagreements:
            print(f"disagreement: {line}")
        return 0 if report.ok else 1
    elif args.command == "export-prism":
        print(commands.cmd_export_prism(config, args.out, jsonl=args.jsonl))
    elif args.command == "compare":
        for row in commands.cmd_compare(config):
            print(",".join(str(x) for x in row))
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or get_settings().LOG_LEVEL)
    try:
        return run(args)
    except BuchiRLError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
