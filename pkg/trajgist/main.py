"""
TrajGiST — Benchmark CLI
=========================
Subcommands:
  generate       write a synthetic trajectory CSV
  build-and-run  build one index variant, run a workload, emit a JSON report
  oracle-check   run the index × split matrix against brute force

Usage:
  python -m trajgist.main generate --out data.csv --seed 1
  python -m trajgist.main build-and-run --data data.csv --index quadtree --split merge --k 10 --out report.json
  python -m trajgist.main oracle-check --data data.csv --include-equi
"""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from .bench.generator import DatasetSpec, generate_trajectories, write_csv
from .bench.ingestion import TrajectoryStore, load_csv
from .bench.oracle import check_matrix, default_matrix, split_ratios
from .bench.report import report_emit
from .bench.runner import build_and_run
from .bench.workload import WorkloadSpec, build_queries, load_workload
from .config import load_config, settings
from .core.errors import TrajIndexError
from .index.base import IndexKind, IndexSettings
from .split.config import SplitAlgorithm, SplitConfig

logger = logging.getLogger("trajgist.main")

EXIT_ERROR = 1
EXIT_MISMATCH = 2


# ── Logging setup ─────────────────────────────────────────
def setup_logging(level: Optional[str] = None) -> None:
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if settings.LOG_FILE:
        Path(settings.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(settings.LOG_FILE))
    logging.basicConfig(
        level=(level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )


# ── Config layering (flag > YAML > default) ───────────────
def _override(section: Dict[str, Any], **flags: Any) -> Dict[str, Any]:
    out = dict(section)
    out.update({k: v for k, v in flags.items() if v is not None})
    return out


def dataset_spec(config: Dict[str, Any], args: argparse.Namespace) -> DatasetSpec:
    return DatasetSpec(**_override(
        config.get("dataset", {}),
        seed=getattr(args, "seed", None),
        model=getattr(args, "model", None),
        vehicles=getattr(args, "vehicles", None),
        trips_per_vehicle=getattr(args, "trips", None),
        instants_per_trip=getattr(args, "instants", None),
    ))


def index_settings(config: Dict[str, Any], args: argparse.Namespace) -> IndexSettings:
    section = _override(
        config.get("index", {}),
        node_capacity=args.node_cap,
        fill_factor=args.fill,
        bucket_size=args.bucket,
    )
    section.pop("kind", None)
    return IndexSettings(**section)


def derived_m(store: TrajectoryStore) -> int:
    """Segments per box so an average trajectory splits into about 10 boxes."""
    return max(1, math.ceil(store.mean_segments / 10))


def split_config(config: Dict[str, Any], args: argparse.Namespace, store: TrajectoryStore) -> SplitConfig:
    section = _override(
        config.get("split", {}),
        algorithm=args.split, k=args.k, m=args.m, qx=args.qx, qy=args.qy, qt=args.qt,
    )
    if section.get("m") is None:
        section["m"] = derived_m(store)
    return SplitConfig(**section)


def workload_spec(config: Dict[str, Any], args: argparse.Namespace) -> WorkloadSpec:
    if args.workload:
        spec = load_workload(args.workload)
    else:
        spec = WorkloadSpec(**config.get("workload", {}))
    if args.seed is not None:
        spec = spec.model_copy(update={"seed": args.seed})
    return spec


def load_store(config: Dict[str, Any], args: argparse.Namespace) -> TrajectoryStore:
    if args.data:
        return load_csv(args.data)
    spec = DatasetSpec(**config.get("dataset", {}))
    logger.info("No --data given; generating the configured %s dataset", spec.model.value)
    return TrajectoryStore.from_trajectories(generate_trajectories(spec))


# ── Subcommands ───────────────────────────────────────────
def cmd_generate(config: Dict[str, Any], args: argparse.Namespace) -> int:
    spec = dataset_spec(config, args)
    write_csv(generate_trajectories(spec), args.out)
    return 0


def cmd_build_and_run(config: Dict[str, Any], args: argparse.Namespace) -> int:
    store = load_store(config, args)
    kind = IndexKind(args.index or config.get("index", {}).get("kind", "rtree"))
    split = split_config(config, args, store)
    workload = workload_spec(config, args)
    workers = args.workers or config.get("run", {}).get("workers", 1)

    queries = build_queries(workload, store, store.extent())
    report = build_and_run(
        store, kind, split, queries,
        settings=index_settings(config, args),
        workers=workers,
        extra_config={"workload": workload.model_dump(mode="json")},
    )
    total = report.aggregate["total"]
    logger.info(
        "%s/%s — %d queries, %d candidates, %d results",
        kind.value, split.label, total["queries"], total["candidates"], total["results"],
    )
    if args.out:
        report_emit(report, args.out)
    else:
        print(report.model_dump_json(indent=2))
    return 0


def cmd_oracle_check(config: Dict[str, Any], args: argparse.Namespace) -> int:
    store = load_store(config, args)
    base = split_config(config, args, store)
    workload = workload_spec(config, args)
    queries = build_queries(workload, store, store.extent())
    kinds = [IndexKind(args.index)] if args.index else list(IndexKind)
    splits = default_matrix(base, include_equi=args.include_equi)

    mismatches = check_matrix(
        store, queries, kinds, splits,
        settings=index_settings(config, args),
        workers=args.workers or 1,
    )
    ratios = split_ratios(store, base).summary()
    logger.info(
        "Split ratios vs optimum: merge mean %.4f max %.4f, linear mean %.4f max %.4f",
        ratios["merge_mean"], ratios["merge_max"], ratios["linear_mean"], ratios["linear_max"],
    )
    for m in mismatches:
        print(m)
    if mismatches:
        logger.error("Oracle check failed: %d mismatches", len(mismatches))
        return EXIT_MISMATCH
    logger.info("Oracle check passed: %d cells × %d queries", len(kinds) * len(splits), len(queries))
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "build-and-run": cmd_build_and_run,
    "oracle-check": cmd_oracle_check,
}


# ── Argument parsing ──────────────────────────────────────
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trajgist", description="Multi-entry trajectory index benchmark")
    parser.add_argument("--config", default=None, help="YAML config file (default: TRAJGIST_CONFIG or packaged)")
    parser.add_argument("--log-level", default=None, help="Override TRAJGIST_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Write a synthetic trajectory CSV")
    gen.add_argument("--out", required=True, help="CSV output path")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--model", choices=["random_waypoint", "loop"])
    gen.add_argument("--vehicles", type=int)
    gen.add_argument("--trips", type=int)
    gen.add_argument("--instants", type=int)

    for name, help_text in (
        ("build-and-run", "Build one index variant and run a workload"),
        ("oracle-check", "Check the index × split matrix against brute force"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--data", help="Trajectory CSV (default: generate from config)")
        p.add_argument("--index", choices=[k.value for k in IndexKind])
        p.add_argument("--split", choices=[a.value for a in SplitAlgorithm])
        p.add_argument("--k", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--qx", type=float)
        p.add_argument("--qy", type=float)
        p.add_argument("--qt", type=float)
        p.add_argument("--bucket", type=int)
        p.add_argument("--node-cap", type=int)
        p.add_argument("--fill", type=float)
        p.add_argument("--seed", type=int, help="Workload seed")
        p.add_argument("--workload", help="Workload YAML file")
        p.add_argument("--workers", type=int)
        if name == "build-and-run":
            p.add_argument("--out", help="Report path (default: stdout)")
        else:
            p.add_argument("--include-equi", action="store_true", help="Add EquiSplit cells")
    return parser


def cli(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        config = load_config(args.config)
        return COMMANDS[args.command](config, args)
    except (TrajIndexError, ValidationError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(cli())
