# TrajGiST — Bench Package (data generation, ingestion, workloads, reports)
from .generator import DatasetSpec, MovementModel, generate, generate_trajectories, write_csv
from .ingestion import CleaningStats, TrajectoryStore, load_csv
from .oracle import Mismatch, SplitRatios, check_matrix, default_matrix, split_ratios
from .report import Report, report_emit, report_load, result_digest
from .runner import build, build_and_run, run
from .workload import QueryKind, WorkloadSpec, build_queries, load_workload

__all__ = [
    "DatasetSpec", "MovementModel", "generate", "generate_trajectories", "write_csv",
    "CleaningStats", "TrajectoryStore", "load_csv",
    "Mismatch", "SplitRatios", "check_matrix", "default_matrix", "split_ratios",
    "Report", "report_emit", "report_load", "result_digest",
    "build", "build_and_run", "run",
    "QueryKind", "WorkloadSpec", "build_queries", "load_workload",
]
