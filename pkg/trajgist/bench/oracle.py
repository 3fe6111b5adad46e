"""
TrajGiST — Oracle Matrix Check
===============================
Runs every (index kind × split configuration) cell over the same store and
workload, validates each tree, and compares every answer with brute force:
range results must be set-equal, KNN results must agree on ids and on
distances within a relative tolerance.

Also measures how far MergeSplit and LinearSplit land from their exact
optimum on short trajectory prefixes.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import TrajIndexError
from ..core.trajectory import TrajectorySequence
from ..index.base import IndexKind, IndexSettings
from ..query.engine import KnnQuery, brute_force_knn, brute_force_search
from ..split.algorithms import default_metric, linear_split, merge_split, query_cost_fn
from ..split.config import SplitAlgorithm, SplitConfig
from ..split.oracle import optimal_linear_cost, optimal_split_volume, total_cost, total_volume
from .runner import build, run
from .workload import Query, QueryKind

logger = logging.getLogger(__name__)

KNN_REL_TOL = 1e-9


@dataclass
class Mismatch:
    cell: str
    query_index: int
    kind: str
    expected: List[int]
    got: List[int]
    detail: str = ""

    def __str__(self) -> str:
        return (
            f"[{self.cell}] query #{self.query_index} ({self.kind}): "
            f"expected {self.expected[:10]}, got {self.got[:10]} {self.detail}".rstrip()
        )


def default_matrix(
    base: SplitConfig,
    include_equi: bool = False,
) -> List[SplitConfig]:
    """none, seg/merge/adapt at two sizes each, linear; equi on request."""
    def with_(**kw) -> SplitConfig:
        return base.model_copy(update=kw)

    cells = [with_(algorithm=SplitAlgorithm.NONE)]
    for m in (5, 20):
        cells.append(with_(algorithm=SplitAlgorithm.SEG, m=m))
    for k in (5, 20):
        cells.append(with_(algorithm=SplitAlgorithm.MERGE, k=k))
    for m in (5, 20):
        cells.append(with_(algorithm=SplitAlgorithm.ADAPT, m=m))
    cells.append(with_(algorithm=SplitAlgorithm.LINEAR))
    if include_equi:
        for k in (5, 20):
            cells.append(with_(algorithm=SplitAlgorithm.EQUI, k=k))
    return cells


def expected_answers(
    store: Mapping[int, TrajectorySequence],
    queries: Sequence[Tuple[QueryKind, Query]],
) -> List[Tuple[List[int], Optional[List[float]]]]:
    answers = []
    for _, q in queries:
        if isinstance(q, KnnQuery):
            answers.append(brute_force_knn(q, store))
        else:
            answers.append((brute_force_search(q, store), None))
    return answers


def _distances_match(expected: List[float], got: List[float]) -> bool:
    return len(expected) == len(got) and all(
        math.isclose(e, g, rel_tol=KNN_REL_TOL, abs_tol=0.0) or e == g
        for e, g in zip(expected, got)
    )


def check_matrix(
    store: Mapping[int, TrajectorySequence],
    queries: Sequence[Tuple[QueryKind, Query]],
    kinds: Sequence[IndexKind] = tuple(IndexKind),
    splits: Optional[Sequence[SplitConfig]] = None,
    settings: Optional[IndexSettings] = None,
    workers: int = 1,
) -> List[Mismatch]:
    """Every cell against brute force; result digests are also compared across cells."""
    splits = list(splits) if splits is not None else default_matrix(SplitConfig())
    answers = expected_answers(store, queries)
    mismatches: List[Mismatch] = []
    reference_digests: Optional[List[str]] = None

    for kind in kinds:
        for split in splits:
            cell = f"{IndexKind(kind).value}/{split.label}"
            built = build(store, kind, split, settings)
            try:
                built.index.validate()
            except TrajIndexError as exc:
                mismatches.append(Mismatch(cell, -1, "validate", [], [], str(exc)))
                continue

            results, reports = run(store, built.index, queries, workers)
            for i, ((qkind, _), result, (ids, dists)) in enumerate(zip(queries, results, answers)):
                ok = result.tuple_ids == ids
                if ok and dists is not None:
                    ok = _distances_match(dists, result.distances)
                if not ok:
                    mismatches.append(Mismatch(cell, i, QueryKind(qkind).value, ids, result.tuple_ids))

            digests = [r.digest for r in reports]
            if reference_digests is None:
                reference_digests = digests
            elif digests != reference_digests:
                differing = sum(a != b for a, b in zip(digests, reference_digests))
                logger.warning("%s: %d result digests differ from the first cell", cell, differing)
            logger.info("Cell %s checked — %d queries", cell, len(queries))

    logger.info(
        "Oracle check finished: %d cells, %d mismatches",
        len(kinds) * len(splits), len(mismatches),
    )
    return mismatches


# ── Split quality against the exact optimum ──────────────
@dataclass
class SplitRatios:
    """Per-trajectory heuristic total over exact-optimum total."""

    merge: List[float] = field(default_factory=list)
    linear: List[float] = field(default_factory=list)

    @staticmethod
    def _mean_max(values: List[float]) -> Tuple[float, float]:
        if not values:
            return math.nan, math.nan
        return float(np.mean(values)), float(np.max(values))

    def summary(self) -> Dict[str, float]:
        merge_mean, merge_max = self._mean_max(self.merge)
        linear_mean, linear_max = self._mean_max(self.linear)
        return {
            "merge_mean": merge_mean,
            "merge_max": merge_max,
            "linear_mean": linear_mean,
            "linear_max": linear_max,
        }


def split_ratios(
    store: Mapping[int, TrajectorySequence],
    cfg: SplitConfig,
    k: int = 4,
    max_segments: int = 12,
    limit: int = 50,
) -> SplitRatios:
    """
    MergeSplit and LinearSplit against their dynamic-programming optimum.

    Each trajectory is cut to its first ``max_segments`` segments so the
    exact programs stay cheap. MergeSplit is compared at ``k`` boxes under the
    prefix's own padded-volume metric; LinearSplit under the query-extent cost
    of ``cfg``. Trajectories whose optimum is zero have no ratio.
    """
    ratios = SplitRatios()
    cost = query_cost_fn(cfg.qx, cfg.qy, cfg.qt, cfg.time_scale)
    for tid in sorted(store)[:limit]:
        traj = store[tid]
        if traj.num_segments < 2:
            continue
        prefix = TrajectorySequence(tid, traj.instants[: max_segments + 1])
        metric = default_metric(prefix)

        _, best = optimal_split_volume(prefix, k, metric)
        if best > 0:
            ratios.merge.append(total_volume(merge_split(prefix, k, metric), metric) / best)

        _, best = optimal_linear_cost(prefix, cfg.qx, cfg.qy, cfg.qt, cfg.time_scale)
        if best > 0:
            heuristic = linear_split(prefix, cfg.qx, cfg.qy, cfg.qt, cfg.time_scale)
            ratios.linear.append(total_cost(heuristic, cost) / best)

    logger.debug("Split ratios over %d/%d trajectories", len(ratios.merge), len(ratios.linear))
    return ratios
