"""Command-line entry point: ``lpmine --log FILE [options]``.

Writes ``lpms.json`` and/or one ``lpm_<rank>.dot`` per selected model to
``--out-dir`` and prints one summary line per model.  Exit status is 0 on
success, 2 for configuration errors and 3 for input errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from .errors import ConfigurationError, LogParseError, ResourceLimitError
from .eventlog import EventLog, group_by_resource_day, parse_xes_events, read_log
from .export import export_dot, export_json
from .metrics import MetricWeights
from .miner import MinerConfig, mine
from .tree import to_text

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lpmine", description="Mine local process models from an event log.")
    p.add_argument("--log", required=True, help="event log file (.csv or .xes, optionally .gz)")
    p.add_argument("--format", choices=["csv", "xes"], help="log format (default: from extension)")
    g = p.add_argument_group("csv columns")
    g.add_argument("--case-column", default="case")
    g.add_argument("--activity-column", default="activity")
    g.add_argument("--timestamp-column", default=None,
                   help="order events by this column (default: 'timestamp' if present)")
    g = p.add_argument_group("xes day traces")
    g.add_argument("--resource", help="rebuild traces as the per-day events of this org:resource")
    g.add_argument("--day-order", choices=["timestamp", "log"], default="timestamp")
    g = p.add_argument_group("miner")
    g.add_argument("--min-support", type=float, default=0.7)
    g.add_argument("--min-confidence", type=float, default=0.0)
    g.add_argument("--min-determinism", type=float, default=0.0)
    g.add_argument("--min-language-fit", type=float, default=0.0)
    g.add_argument("--min-coverage", type=float, default=0.0)
    g.add_argument("--max-iterations", type=int, default=4)
    g.add_argument("--min-leaves", type=int, default=3)
    g.add_argument("--language-fit-bound", type=int, default=5)
    g.add_argument("--weights", default="1,1,1,1,1",
                   help="ranking weights for support,confidence,language_fit,determinism,coverage")
    g.add_argument("--top-k", type=int, default=20)
    g.add_argument("--max-frontier", type=int, default=10_000,
                   help="expansion frontier cap; 0 disables the cap")
    g.add_argument("--no-prune", action="store_true", help="disable monotonicity pruning")
    g.add_argument("--prune-loop-left", action=argparse.BooleanOptionalAction, default=True,
                   help="also prune loop(b,a) expansions on failed support")
    g = p.add_argument_group("output")
    g.add_argument("--out-dir", default=".")
    g.add_argument("--output", choices=["json", "dot", "both"], default="both")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _load(args) -> EventLog:
    path = Path(args.log)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    fmt = args.format or ("xes" if ".xes" in [x.lower() for x in path.suffixes] else None)
    if args.resource is not None:
        if fmt != "xes":
            raise ConfigurationError("--resource needs an XES log")
        return group_by_resource_day(parse_xes_events(path), args.resource, args.day_order)
    if fmt == "xes":
        return read_log(path, "xes")
    return read_log(path, fmt, case=args.case_column, activity=args.activity_column,
                    timestamp=args.timestamp_column)


def _config(args) -> MinerConfig:
    return MinerConfig(
        min_support=args.min_support,
        min_confidence=args.min_confidence,
        min_determinism=args.min_determinism,
        min_language_fit=args.min_language_fit,
        min_coverage=args.min_coverage,
        max_iterations=args.max_iterations,
        min_leaves=args.min_leaves,
        language_fit_bound=args.language_fit_bound,
        weights=MetricWeights.parse(args.weights),
        top_k=args.top_k,
        pruning_enabled=not args.no_prune,
        prune_loop_left=args.prune_loop_left,
        max_frontier=args.max_frontier or None,
    )


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help exits 0, bad flags exit EXIT_CONFIG
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = _config(args)
    except ConfigurationError as exc:
        print(f"lpmine: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        log_ = _load(args)
    except ConfigurationError as exc:
        print(f"lpmine: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, LogParseError) as exc:
        print(f"lpmine: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        result = mine(log_, config)
    except ConfigurationError as exc:
        print(f"lpmine: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"lpmine: resource limit: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.output in ("json", "both"):
        (out / "lpms.json").write_text(export_json(result), encoding="utf-8")
    if args.output in ("dot", "both"):
        for rank, model in enumerate(result.selected, start=1):
            (out / f"lpm_{rank}.dot").write_text(export_dot(model.net, model.report), encoding="utf-8")
    for rank, model in enumerate(result.selected, start=1):
        r = model.report
        print(f"{rank}\t{to_text(model.tree)}\tscore={r.weighted_score:.4f}"
              f"\tsupport={r.support:.4f}\tconfidence={r.confidence:.4f}")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
