"""
TrajGiST — Benchmark Runner
============================
Build an index over a tuple store, run a workload through the query
engine and collect a Report.

Construction is sequential. Queries only read the finished index, so
``workers > 1`` runs them on a thread pool; results keep workload order.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from ..core.geometry import BoxMetric
from ..core.trajectory import TrajectorySequence
from ..index.base import IndexKind, IndexSettings, SearchTree
from ..index.factory import create_index
from ..query.engine import KnnQuery, ResultSet, knn, search
from ..split.algorithms import extract_value
from ..split.config import SplitConfig
from .ingestion import TrajectoryStore
from .report import BuildReport, QueryReport, Report, aggregate, result_digest
from .workload import Query, QueryKind

logger = logging.getLogger(__name__)


@dataclass
class BuildResult:
    index: SearchTree
    stats: BuildReport
    metric: BoxMetric


def _elapsed_ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


def dataset_metric(store: Mapping[int, TrajectorySequence], cfg: SplitConfig) -> BoxMetric:
    """Padded-volume measure scaled to the whole dataset's extent."""
    extent = TrajectoryStore(store).extent()
    return BoxMetric.for_extent(extent, cfg.rel_pad, cfg.time_scale)


def build(
    store: Mapping[int, TrajectorySequence],
    kind: IndexKind,
    split: SplitConfig,
    settings: Optional[IndexSettings] = None,
) -> BuildResult:
    """ExtractValue every trajectory (ascending id) and insert the entries."""
    t0 = time.perf_counter()
    metric = dataset_metric(store, split)
    index = create_index(kind, settings, metric)
    for tuple_id in sorted(store):
        index.insert(extract_value(store[tuple_id], split, metric))
    stats = BuildReport(
        entries=index.entry_count,
        nodes=index.node_count,
        height=index.height,
        ms=_elapsed_ms(t0),
    )
    logger.info(
        "Built %s with %s — %d entries, %d nodes, height %d in %.1f ms",
        IndexKind(kind).value, split.label, stats.entries, stats.nodes, stats.height, stats.ms,
    )
    return BuildResult(index, stats, metric)


def execute(index: SearchTree, query: Query, store: Mapping[int, TrajectorySequence]) -> ResultSet:
    if isinstance(query, KnnQuery):
        return knn(index, query, store)
    return search(index, query, store)


def _run_one(index, store, item: Tuple[QueryKind, Query]) -> Tuple[ResultSet, QueryReport]:
    kind, query = item
    t0 = time.perf_counter()
    result = execute(index, query, store)
    report = QueryReport(
        kind=QueryKind(kind).value,
        matched_entries=result.stats.matched_entries,
        candidates=result.stats.candidates,
        results=result.stats.results,
        ms=_elapsed_ms(t0),
        digest=result_digest(result.tuple_ids),
        short=result.short,
    )
    return result, report


def run(
    store: Mapping[int, TrajectorySequence],
    index: SearchTree,
    queries: Sequence[Tuple[QueryKind, Query]],
    workers: int = 1,
) -> Tuple[List[ResultSet], List[QueryReport]]:
    """Execute every query; returned lists follow the input order."""
    t0 = time.perf_counter()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(lambda item: _run_one(index, store, item), queries))
    else:
        pairs = [_run_one(index, store, item) for item in queries]
    logger.info(
        "Ran %d queries on %s in %.1f ms (workers=%d)",
        len(queries), index.name, _elapsed_ms(t0), workers,
    )
    return [p[0] for p in pairs], [p[1] for p in pairs]


def build_and_run(
    store: Mapping[int, TrajectorySequence],
    kind: IndexKind,
    split: SplitConfig,
    queries: Sequence[Tuple[QueryKind, Query]],
    settings: Optional[IndexSettings] = None,
    workers: int = 1,
    extra_config: Optional[Dict[str, Any]] = None,
) -> Report:
    settings = settings or IndexSettings()
    built = build(store, kind, split, settings)
    _, reports = run(store, built.index, queries, workers)
    config = {
        "index": IndexKind(kind).value,
        "split": split.model_dump(mode="json"),
        "index_settings": settings.model_dump(mode="json"),
        "trajectories": len(store),
        **(extra_config or {}),
    }
    return Report(config=config, build=built.stats, queries=reports, aggregate=aggregate(reports))
