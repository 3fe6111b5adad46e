"""
TrajGiST — Exact Split Oracles
===============================
Dynamic programs over contiguous split points. Quadratic or worse, meant
for short trajectory prefixes: the split tests and the split-ratio
summary that oracle-check logs.
"""

import math
from typing import Callable, List, Optional, Tuple

from ..core.geometry import BoxMetric, STBox, stbox_union
from ..core.trajectory import TrajectorySequence, bbox, run_bbox, segment_bbox
from .algorithms import require_positive, default_metric, query_cost_fn


def total_volume(boxes: List[STBox], metric: BoxMetric) -> float:
    return sum(metric.volume(b) for b in boxes)


def total_cost(boxes: List[STBox], cost: Callable[[STBox], float]) -> float:
    return sum(cost(b) for b in boxes)


def _run_weights(traj: TrajectorySequence, weight: Callable[[STBox], float]):
    """w[i][j] = weight of the box over segments i..j-1, for all i < j."""
    n = traj.num_segments
    w = [[math.inf] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        box = segment_bbox(traj, i)
        w[i][i + 1] = weight(box)
        for j in range(i + 2, n + 1):
            box = stbox_union(box, segment_bbox(traj, j - 1))
            w[i][j] = weight(box)
    return w


def _backtrack(traj: TrajectorySequence, cuts: List[int]) -> List[STBox]:
    return [run_bbox(traj, a, b) for a, b in zip(cuts, cuts[1:])]


def optimal_split_volume(
    traj: TrajectorySequence,
    k: int,
    metric: Optional[BoxMetric] = None,
) -> Tuple[List[STBox], float]:
    """Split into exactly min(k, n) runs minimising total padded volume."""
    require_positive("k", k)
    metric = metric or default_metric(traj)
    n = traj.num_segments
    if n == 0:
        box = bbox(traj)
        return [box], metric.volume(box)

    r = min(k, n)
    w = _run_weights(traj, metric.volume)
    # best[c][j]: c runs covering segments 0..j-1
    best = [[math.inf] * (n + 1) for _ in range(r + 1)]
    arg = [[0] * (n + 1) for _ in range(r + 1)]
    best[0][0] = 0.0
    for c in range(1, r + 1):
        for j in range(c, n + 1):
            for i in range(c - 1, j):
                v = best[c - 1][i] + w[i][j]
                if v < best[c][j]:
                    best[c][j], arg[c][j] = v, i

    cuts = [n]
    for c in range(r, 0, -1):
        cuts.append(arg[c][cuts[-1]])
    cuts.reverse()
    return _backtrack(traj, cuts), best[r][n]


def optimal_linear_cost(
    traj: TrajectorySequence,
    qx: float,
    qy: float,
    qt: float,
    time_scale: float = 1.0,
) -> Tuple[List[STBox], float]:
    """Contiguous split with any number of runs minimising the query-extent cost."""
    cost = query_cost_fn(qx, qy, qt, time_scale)
    n = traj.num_segments
    if n == 0:
        box = bbox(traj)
        return [box], cost(box)

    w = _run_weights(traj, cost)
    best = [math.inf] * (n + 1)
    arg = [0] * (n + 1)
    best[0] = 0.0
    for j in range(1, n + 1):
        for i in range(j):
            v = best[i] + w[i][j]
            if v < best[j]:
                best[j], arg[j] = v, i

    cuts = [n]
    while cuts[-1] > 0:
        cuts.append(arg[cuts[-1]])
    cuts.reverse()
    return _backtrack(traj, cuts), best[n]
