"""
TrajGiST — Trajectory Splitting (ExtractValue)
===============================================
Turns one trajectory into several bounding boxes before insertion.

Every algorithm splits only at stored instants and returns boxes over
contiguous, non-overlapping runs of segments that together cover the whole
trajectory. A run is kept as (first instant, last instant); adjacent runs
share their boundary instant.

  EquiSplit   — ⌈n/k⌉ segments per box
  SegSplit    — m segments per box
  MergeSplit  — greedy merging of adjacent boxes by least volume growth
  AdaptSplit  — MergeSplit with k = ⌈n/m⌉
  LinearSplit — single pass, opens a new box when extending would cost more
                than a separate box under a query-extent cost model
"""

import heapq
import logging
import math
from typing import Callable, List, Optional, Tuple

from ..core.errors import InvalidParameterError
from ..core.geometry import BoxMetric, STBox, stbox_union
from ..core.trajectory import TrajectorySequence, bbox, run_bbox, segment_bbox
from ..index.base import IndexEntry
from .config import SplitAlgorithm, SplitConfig

logger = logging.getLogger(__name__)

Run = Tuple[int, int]


def require_positive(name: str, value: int) -> None:
    if value < 1:
        raise InvalidParameterError(f"{name} must be >= 1, got {value}")


def _boxes(traj: TrajectorySequence, runs: List[Run]) -> List[STBox]:
    return [run_bbox(traj, first, last) for first, last in runs]


def default_metric(traj: TrajectorySequence) -> BoxMetric:
    """Padding relative to the trajectory's own extent (standalone use)."""
    return BoxMetric.for_extent(bbox(traj))


# ── Fixed-length runs ─────────────────────────────────────
def _fixed_runs(n: int, length: int) -> List[Run]:
    return [(s, min(n, s + length)) for s in range(0, n, length)]


def equi_split(traj: TrajectorySequence, k: int) -> List[STBox]:
    require_positive("k", k)
    n = traj.num_segments
    if n == 0:
        return [bbox(traj)]
    return _boxes(traj, _fixed_runs(n, math.ceil(n / k)))


def seg_split(traj: TrajectorySequence, m: int) -> List[STBox]:
    require_positive("m", m)
    n = traj.num_segments
    if n == 0:
        return [bbox(traj)]
    return _boxes(traj, _fixed_runs(n, m))


# ── MergeSplit / AdaptSplit ───────────────────────────────
def merge_runs(traj: TrajectorySequence, k: int, metric: BoxMetric) -> List[Run]:
    """
    Greedy adjacent merging, O(n log n).

    Candidate merges sit in a heap keyed by (volume growth, left run start);
    entries made stale by an earlier merge are skipped via version counters.
    """
    n = traj.num_segments
    boxes = [segment_bbox(traj, i) for i in range(n)]
    ends = list(range(1, n + 1))
    nxt = list(range(1, n)) + [-1]
    prv = [-1] + list(range(n - 1))
    version = [0] * n
    alive = [True] * n

    def growth(i: int, j: int) -> float:
        merged = stbox_union(boxes[i], boxes[j])
        return metric.volume(merged) - metric.volume(boxes[i]) - metric.volume(boxes[j])

    heap = [(growth(i, i + 1), i, 0, 0) for i in range(n - 1)]
    heapq.heapify(heap)

    count = n
    while count > k and heap:
        _, i, vi, vj = heapq.heappop(heap)
        j = nxt[i] if alive[i] else -1
        if j < 0 or version[i] != vi or version[j] != vj:
            continue
        boxes[i] = stbox_union(boxes[i], boxes[j])
        ends[i] = ends[j]
        alive[j] = False
        nxt[i] = nxt[j]
        if nxt[j] >= 0:
            prv[nxt[j]] = i
        version[i] += 1
        count -= 1
        if prv[i] >= 0:
            p = prv[i]
            heapq.heappush(heap, (growth(p, i), p, version[p], version[i]))
        if nxt[i] >= 0:
            q = nxt[i]
            heapq.heappush(heap, (growth(i, q), i, version[i], version[q]))

    return [(i, ends[i]) for i in range(n) if alive[i]]


def merge_split(
    traj: TrajectorySequence,
    k: int,
    metric: Optional[BoxMetric] = None,
) -> List[STBox]:
    require_positive("k", k)
    if traj.num_segments == 0:
        return [bbox(traj)]
    metric = metric or default_metric(traj)
    return _boxes(traj, merge_runs(traj, k, metric))


def adapt_split(
    traj: TrajectorySequence,
    m: int,
    metric: Optional[BoxMetric] = None,
) -> List[STBox]:
    require_positive("m", m)
    n = traj.num_segments
    if n == 0:
        return [bbox(traj)]
    return merge_split(traj, math.ceil(n / m), metric)


# ── LinearSplit ───────────────────────────────────────────
def query_cost_fn(
    qx: float, qy: float, qt: float, time_scale: float = 1.0,
) -> Callable[[STBox], float]:
    """Expected-access cost of a box for range queries of extent (qx, qy, qt)."""
    if min(qx, qy, qt) < 0:
        raise InvalidParameterError("query extents must be >= 0")

    def cost(box: STBox) -> float:
        return (
            (box.xmax - box.xmin + qx)
            * (box.ymax - box.ymin + qy)
            * ((box.tmax - box.tmin + qt) * time_scale)
        )

    return cost


def linear_runs(traj: TrajectorySequence, cost: Callable[[STBox], float]) -> List[Run]:
    n = traj.num_segments
    runs: List[Run] = []
    first = 0
    current = segment_bbox(traj, 0)
    for i in range(1, n):
        seg = segment_bbox(traj, i)
        extended = stbox_union(current, seg)
        if cost(extended) > cost(current) + cost(seg):
            runs.append((first, i))
            first, current = i, seg
        else:
            current = extended
    runs.append((first, n))
    return runs


def linear_split(
    traj: TrajectorySequence,
    qx: float,
    qy: float,
    qt: float,
    time_scale: float = 1.0,
) -> List[STBox]:
    cost = query_cost_fn(qx, qy, qt, time_scale)
    if traj.num_segments == 0:
        return [bbox(traj)]
    return _boxes(traj, linear_runs(traj, cost))


# ── ExtractValue ──────────────────────────────────────────
def extract_value(
    traj: TrajectorySequence,
    cfg: SplitConfig,
    metric: Optional[BoxMetric] = None,
) -> List[IndexEntry]:
    """Split one trajectory into index entries sharing its tuple id."""
    algo = cfg.algorithm
    if algo is SplitAlgorithm.NONE:
        boxes = [bbox(traj)]
    elif algo is SplitAlgorithm.EQUI:
        boxes = equi_split(traj, cfg.k)
    elif algo is SplitAlgorithm.SEG:
        boxes = seg_split(traj, cfg.m)
    elif algo is SplitAlgorithm.MERGE:
        boxes = merge_split(traj, cfg.k, metric)
    elif algo is SplitAlgorithm.ADAPT:
        boxes = adapt_split(traj, cfg.m, metric)
    elif algo is SplitAlgorithm.LINEAR:
        boxes = linear_split(traj, cfg.qx, cfg.qy, cfg.qt, cfg.time_scale)
    else:
        raise InvalidParameterError(f"unknown split algorithm: {algo}")
    logger.debug(
        "Trajectory %s: %d segments → %d boxes (%s)",
        traj.tuple_id, traj.num_segments, len(boxes), cfg.label,
    )
    return [IndexEntry(box, traj.tuple_id) for box in boxes]
