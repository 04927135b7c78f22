#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Command-line interface for the top-k high-utility itemset miner
Subcommands: mine, verify, bench, stats
"""

import argparse
import json
import sys
import traceback
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from .bench import BenchConfig, run_bench
from .config import get_config
from .data_writer import create_report_writer, create_result_writer
from .ingest import DatasetParseError, EmptyDatabaseError, create_dataset_source, dataset_summary, parse_profits
from .miners import MINERS, MinerOptions, OracleGuardError, expand_boundary_ties, oracle_topk, run_miner
from .strategies import MissingProfitError
from .utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_ORACLE_GUARD = 3


def _split_tokens(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    return [token.strip() for token in value.split(",") if token.strip()]


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {number}")
    return number


def _error(message: str, exc: Optional[BaseException] = None, exit_code: int = EXIT_FAILURE) -> Dict[str, Any]:
    return {"status": "error", "error": message,
            "error_type": type(exc).__name__ if exc else None, "exit_code": exit_code}


def run_mining_task(input_path: str, k: int, algo: str, opts: MinerOptions,
                    strict: bool = True) -> Dict[str, Any]:
    """
    Load a dataset and mine its top-k itemsets

    Args:
        input_path: Dataset file
        k: Number of itemsets sought
        algo: 'tko', 'khmc' or 'oracle'
        opts: Miner options
        strict: Fatal TU mismatches when True

    Returns:
        Dictionary containing results and status:
        {
            "status": "success" | "error",
            "db": Database,
            "result": MiningResult,
            "error": str (if status is "error"),
            "exit_code": int (if status is "error")
        }
    """
    try:
        logger.info(f"Step 1: Loading dataset from {input_path}...")
        db = create_dataset_source("file", file_path=input_path, strict=strict).load()
    except DatasetParseError as e:
        logger.error(f"❌ {input_path}: {e}")
        return _error(f"{input_path}: {e}", e)
    except OSError as e:
        logger.error(f"❌ Cannot read {input_path}: {e}")
        return _error(f"Cannot read {input_path}: {e}", e)

    try:
        logger.info(f"Step 2: Mining top-{k} with {algo}...")
        result = run_miner(algo, db, k, opts)
    except OracleGuardError as e:
        logger.error(f"❌ {e}")
        return _error(str(e), e, EXIT_ORACLE_GUARD)
    except MissingProfitError as e:
        return _error(str(e), e, EXIT_USAGE)
    except Exception as e:
        error_msg = f"Unexpected error during mining: {e}"
        logger.error(error_msg)
        logger.error(traceback.format_exc())
        return _error(error_msg, e)

    logger.info(f"✅ Mining completed: {len(result.topk)} itemsets, delta_final={result.delta_final}")
    return {"status": "success", "db": db, "result": result}


def _build_options(args, config: Dict[str, Any]) -> MinerOptions:
    profits = None
    if getattr(args, "profits", None):
        with open(args.profits, "rb") as fh:
            profits = parse_profits(fh.read())
    strategies = _split_tokens(getattr(args, "strategies", None))
    if strategies and "pmud" in strategies and not profits:
        raise MissingProfitError("--strategies pmud requires --profits FILE")
    return MinerOptions.from_tokens(
        args.algo,
        strategies=strategies,
        prune=_split_tokens(getattr(args, "prune", None)),
        rsd_n=args.rsd_n or config["mining"]["rsd_n"],
        cov_cap=args.cov_cap or config["mining"]["cov_cap"],
        profits=profits,
        oracle_max_items=args.oracle_max_items or config["mining"]["oracle_max_items"],
        track_memory=bool(getattr(args, "stats", False)),
    )


def cmd_mine(args) -> int:
    config = get_config()
    args.algo = args.algo or config["mining"]["default_algo"]
    try:
        opts = _build_options(args, config)
    except (ValueError, ValidationError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    outcome = run_mining_task(args.input, args.k, args.algo, opts, strict=config["ingest"]["strict"])
    if outcome["status"] != "success":
        print(f"Error: {outcome['error']}", file=sys.stderr)
        return outcome["exit_code"]

    result = outcome["result"]
    topk = expand_boundary_ties(outcome["db"], result) if args.boundary == "relaxed" else result.topk
    writer = create_result_writer(args.format or config["report"]["format"])
    writer.write(result, args.output, topk=topk, include_stats=args.stats, include_audit=args.audit)
    return EXIT_OK


def _diff(expected, actual) -> List[str]:
    expected_set, actual_set = set(expected), set(actual)
    lines = [f"- {' '.join(map(str, itemset))} #UTIL: {u}" for itemset, u in expected if (itemset, u) not in actual_set]
    lines += [f"+ {' '.join(map(str, itemset))} #UTIL: {u}" for itemset, u in actual if (itemset, u) not in expected_set]
    if not lines and list(expected) != list(actual):
        lines.append("~ same itemsets, different order")
    return lines


def cmd_verify(args) -> int:
    config = get_config()
    max_items = args.oracle_max_items or config["mining"]["oracle_max_items"]
    try:
        db = create_dataset_source("file", file_path=args.input, strict=config["ingest"]["strict"]).load()
    except (DatasetParseError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    try:
        expected = oracle_topk(db, args.k, max_items=max_items).topk
    except OracleGuardError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ORACLE_GUARD

    algos = ["tko", "khmc"] if args.algo == "all" else [args.algo]
    exit_code = EXIT_OK
    for algo in algos:
        try:
            actual = run_miner(algo, db, args.k).topk
        except Exception as e:
            logger.error(f"❌ {algo} failed: {e}")
            print(f"FAIL {algo} k={args.k}: {e}")
            exit_code = EXIT_FAILURE
            continue
        differences = _diff(expected, actual)
        if differences:
            print(f"FAIL {algo} k={args.k}")
            print("\n".join(differences))
            exit_code = EXIT_FAILURE
        else:
            print(f"OK {algo} k={args.k} ({len(actual)} itemsets)")
    return exit_code


def cmd_bench(args) -> int:
    try:
        bench_config = BenchConfig.from_file(args.config)
    except (OSError, ValueError) as e:
        print(f"Error: cannot load bench config {args.config}: {e}", file=sys.stderr)
        return EXIT_FAILURE

    updates = {}
    if args.repetitions:
        updates["repetitions"] = args.repetitions
    if args.workers:
        updates["workers"] = args.workers
    if args.attach_audit:
        updates["attach_audit"] = True
    if updates:
        bench_config = bench_config.model_copy(update=updates)

    report = run_bench(bench_config)
    try:
        writer = create_report_writer(args.format, output_path=args.output)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    written = writer.write_report(report.rows, report.errors,
                                  report.audits if bench_config.attach_audit else None)

    for error in report.errors:
        print(f"Error: {error['dataset']}/{error['algo']}/k={error['k']}: {error['error']}", file=sys.stderr)
    return EXIT_OK if report.ok and written else EXIT_FAILURE


def cmd_stats(args) -> int:
    config = get_config()
    try:
        db = create_dataset_source("file", file_path=args.input, strict=config["ingest"]["strict"]).load()
        summary = dataset_summary(db)
    except (DatasetParseError, EmptyDatabaseError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    if args.format == "json":
        print(json.dumps(summary.to_dict(), indent=2))
    else:
        print(f"transactions: {summary.trans_count}")
        print(f"items: {summary.item_count}")
        print(f"avg_len: {summary.avg_len:.4f}")
        print(f"density_pct: {summary.density_pct:.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Top-k high-utility itemset miner (TKO / KHMC)")
    parser.add_argument("--log-level", default=None, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help="Logging level (default: from HUI_LOG_LEVEL or INFO)")
    parser.add_argument("--log-file", default=None, help="Also log to this file")
    subparsers = parser.add_subparsers(dest="command", required=True)

    mine = subparsers.add_parser("mine", help="Mine the top-k itemsets of a dataset")
    mine.add_argument("--input", required=True, help="Dataset file (i1 i2 ...:TU:u1 u2 ...)")
    mine.add_argument("--k", required=True, type=_positive_int, help="Number of itemsets")
    mine.add_argument("--algo", choices=sorted(MINERS), default=None,
                      help="Mining algorithm (default: tko, or HUI_DEFAULT_ALGO)")
    mine.add_argument("--strategies", help="Comma-separated threshold-raising strategies, e.g. pe,riu,ruc")
    mine.add_argument("--prune", help="Comma-separated pruning properties, e.g. uprune,ea,eucs")
    mine.add_argument("--rsd-n", type=_positive_int, default=None, help="Items selected by RSD (default: 4)")
    mine.add_argument("--cov-cap", type=_positive_int, default=None, help="Coverage subsets per item (default: 1024)")
    mine.add_argument("--profits", help="External utility table (label:profit per line) for pmud")
    mine.add_argument("--oracle-max-items", type=_positive_int, default=None, help="Oracle item guard")
    mine.add_argument("--output", help="Write results to this file instead of stdout")
    mine.add_argument("--format", choices=["json", "csv", "text"], default=None, help="Output format (default: text)")
    mine.add_argument("--stats", action="store_true", help="Include search statistics")
    mine.add_argument("--audit", action="store_true", help="Include the threshold audit log")
    mine.add_argument("--boundary", choices=["strict", "relaxed"], default="strict",
                      help="strict: exactly K itemsets; relaxed: also every itemset tied at delta_final")
    mine.set_defaults(handler=cmd_mine)

    verify = subparsers.add_parser("verify", help="Compare miners against the exhaustive oracle")
    verify.add_argument("--input", required=True, help="Dataset file")
    verify.add_argument("--k", required=True, type=_positive_int, help="Number of itemsets")
    verify.add_argument("--algo", choices=["tko", "khmc", "all"], default="all", help="Miner(s) to verify")
    verify.add_argument("--oracle-max-items", type=_positive_int, default=None, help="Oracle item guard")
    verify.set_defaults(handler=cmd_verify)

    bench = subparsers.add_parser("bench", help="Run a benchmark grid")
    bench.add_argument("--config", required=True, help="JSON bench configuration")
    bench.add_argument("--output", help="Report file (stdout when omitted; required for xlsx)")
    bench.add_argument("--format", choices=["csv", "json", "xlsx"], default="csv", help="Report format")
    bench.add_argument("--repetitions", type=_positive_int, default=None, help="Override repetitions")
    bench.add_argument("--workers", type=_positive_int, default=None, help="Override parallel workers")
    bench.add_argument("--attach-audit", action="store_true", help="Attach threshold audit logs")
    bench.set_defaults(handler=cmd_bench)

    stats = subparsers.add_parser("stats", help="Print dataset characteristics")
    stats.add_argument("--input", required=True, help="Dataset file")
    stats.add_argument("--format", choices=["text", "json"], default="text", help="Output format")
    stats.set_defaults(handler=cmd_stats)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command-line interface for the top-k miner
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    config = get_config()
    setup_logging(level=args.log_level or config["logging"]["level"],
                  log_file=args.log_file or config["logging"]["file"],
                  format_string=config["logging"]["format"])
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
