"""
TrajGiST — Multi-Entry Query Engine
====================================
Filter-refine range search and exact k-nearest-neighbour search over a
multi-entry index and a tuple store (tuple id → TrajectorySequence).

One trajectory may own many index entries, so every query keeps a private
membership set of tuple ids: the first consistent entry of a tuple makes it
a candidate, later entries of the same tuple are skipped.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Set, Tuple

from ..core.errors import EmptyRestrictionError, IntegrityError, InvalidParameterError, OutOfDomainError
from ..core.geometry import INF, Period, Region, STBox
from ..core.trajectory import (
    TrajectorySequence,
    at_time,
    bbox,
    eintersects_point,
    eintersects_region,
    nearest_approach_distance,
    position_at,
)
from ..index.base import SearchTree
from ..index.operators import OPERATOR_CLASSES, BoxOperator, OperatorClass, strategy_for

logger = logging.getLogger(__name__)

Store = Mapping[int, TrajectorySequence]


# ── Refine predicates ─────────────────────────────────────
@dataclass(frozen=True)
class PointRefine:
    """The path passes within eps of (x, y) at some time."""
    x: float
    y: float
    eps: float = 0.0

    def __call__(self, traj: TrajectorySequence) -> bool:
        return eintersects_point(traj, (self.x, self.y), self.eps)


@dataclass(frozen=True)
class PointAtRefine:
    """The object is within eps of (x, y) at instant t."""
    x: float
    y: float
    t: float
    eps: float = 0.0

    def __call__(self, traj: TrajectorySequence) -> bool:
        try:
            px, py = position_at(traj, self.t)
        except OutOfDomainError:
            return False
        dx, dy = px - self.x, py - self.y
        return dx * dx + dy * dy <= self.eps * self.eps


@dataclass(frozen=True)
class RegionPeriodRefine:
    """The path touches the region, during the period when one is given."""
    region: Region
    period: Optional[Period] = None

    def __call__(self, traj: TrajectorySequence) -> bool:
        if self.period is not None:
            traj = at_time(traj, self.period)
            if traj is None:
                return False
        return eintersects_region(traj, self.region)


@dataclass(frozen=True)
class BoxOperatorRefine:
    """Box operator applied to the whole trajectory's bounding box."""
    operator: BoxOperator
    box: STBox

    def __call__(self, traj: TrajectorySequence) -> bool:
        return strategy_for(self.operator).leaf(bbox(traj), self.box)


Refine = Callable[[TrajectorySequence], bool]


# ── Queries and results ───────────────────────────────────
@dataclass(frozen=True)
class RangeQuery:
    box: STBox
    operator: BoxOperator = BoxOperator.OVERLAPS
    refine: Optional[Refine] = None

    @property
    def operator_class(self) -> OperatorClass:
        return OPERATOR_CLASSES[BoxOperator(self.operator)]

    @classmethod
    def point(cls, x: float, y: float, eps: float = 0.0) -> "RangeQuery":
        return cls(STBox.around_point(x, y, eps), refine=PointRefine(x, y, eps))

    @classmethod
    def point_at(cls, x: float, y: float, t: float, eps: float = 0.0) -> "RangeQuery":
        box = STBox.around_point(x, y, eps, Period.instant(t))
        return cls(box, refine=PointAtRefine(x, y, t, eps))

    @classmethod
    def region(cls, region: Region, period: Optional[Period] = None) -> "RangeQuery":
        return cls(STBox.from_region(region, period), refine=RegionPeriodRefine(region, period))

    @classmethod
    def box_operator(cls, box: STBox, operator: BoxOperator) -> "RangeQuery":
        """Pure box query; all-match operators get their exact recheck attached."""
        operator = BoxOperator(operator)
        refine = None
        if OPERATOR_CLASSES[operator] is OperatorClass.ALL_MATCH:
            refine = BoxOperatorRefine(operator, box)
        return cls(box, operator, refine)


@dataclass(frozen=True)
class KnnQuery:
    x: float
    y: float
    k: int = 5
    period: Optional[Period] = None

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameterError(f"k must be >= 1, got {self.k}")

    @property
    def box(self) -> STBox:
        return STBox.around_point(self.x, self.y, 0.0, self.period)


@dataclass
class QueryStats:
    matched_entries: int = 0
    candidates: int = 0
    results: int = 0

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.matched_entries, self.candidates, self.results)


@dataclass
class ResultSet:
    """Unique tuple ids, ascending for range search and by distance for KNN."""
    tuple_ids: List[int]
    stats: QueryStats
    distances: List[float] = field(default_factory=list)
    short: bool = False

    def __len__(self) -> int:
        return len(self.tuple_ids)


def _lookup(store: Store, tuple_id: int) -> TrajectorySequence:
    traj = store.get(tuple_id)
    if traj is None:
        raise IntegrityError(f"tuple {tuple_id} is indexed but missing from the store")
    return traj


# ── Range search ──────────────────────────────────────────
def _effective_refine(q: RangeQuery) -> Optional[Refine]:
    op = BoxOperator(q.operator)
    if op is BoxOperator.CONTAINS:
        raise InvalidParameterError(
            "contains cannot be answered over split entries; query the box index directly"
        )
    if q.refine is None and OPERATOR_CLASSES[op] is OperatorClass.ALL_MATCH:
        return BoxOperatorRefine(op, q.box)
    return q.refine


def search(index: SearchTree, q: RangeQuery, store: Store) -> ResultSet:
    """Deduplicating filter-refine search; each candidate is refined once."""
    refine = _effective_refine(q)
    strategy = strategy_for(q.operator)
    stats = QueryStats()
    seen: Set[int] = set()
    results: List[int] = []

    for entry in index.visit(q.box, strategy):
        stats.matched_entries += 1
        if entry.tuple_id in seen:
            continue
        seen.add(entry.tuple_id)
        stats.candidates += 1
        traj = _lookup(store, entry.tuple_id)
        if refine is None or refine(traj):
            results.append(entry.tuple_id)

    results.sort()
    stats.results = len(results)
    logger.debug(
        "search %s on %s — %d entries, %d candidates, %d results",
        q.operator, index.name, *stats.as_tuple(),
    )
    return ResultSet(results, stats)


def candidate_stats(index: SearchTree, q: RangeQuery, store: Store) -> QueryStats:
    """(entries matched, distinct candidates, exact results) for one range query."""
    return search(index, q, store).stats


# ── KNN ───────────────────────────────────────────────────
def knn(index: SearchTree, q: KnnQuery, store: Store) -> ResultSet:
    """
    Exact k nearest trajectories by nearest-approach distance.

    A candidate is emitted once its exact distance is strictly below the
    lower bound of the next queued entry; equal distances come out by
    ascending tuple id. Trajectories undefined during the query period are
    skipped.
    """
    point = (q.x, q.y)
    stats = QueryStats()
    seen: Set[int] = set()
    pending: List[Tuple[float, int]] = []
    out_ids: List[int] = []
    out_dist: List[float] = []

    def emit_below(bound: float) -> None:
        while pending and len(out_ids) < q.k and pending[0][0] < bound:
            d, tid = heapq.heappop(pending)
            out_ids.append(tid)
            out_dist.append(d)

    for entry, lower in index.visit_nearest(q.box):
        emit_below(lower)
        if len(out_ids) >= q.k or lower == INF:
            break
        stats.matched_entries += 1
        if entry.tuple_id in seen:
            continue
        seen.add(entry.tuple_id)
        traj = _lookup(store, entry.tuple_id)
        try:
            exact = nearest_approach_distance(traj, point, q.period)
        except EmptyRestrictionError:
            continue
        stats.candidates += 1
        heapq.heappush(pending, (exact, entry.tuple_id))

    emit_below(INF)
    stats.results = len(out_ids)
    short = len(out_ids) < q.k
    if short:
        logger.warning(
            "knn on %s found %d of %d requested tuples", index.name, len(out_ids), q.k,
        )
    return ResultSet(out_ids, stats, out_dist, short)


# ── Brute force ───────────────────────────────────────────
def brute_force_search(q: RangeQuery, store: Store) -> List[int]:
    """Exact answer by scanning the store; ids ascending."""
    refine = _effective_refine(q)
    if refine is None:
        raise InvalidParameterError("a brute-force range query needs an exact predicate")
    return sorted(tid for tid, traj in store.items() if refine(traj))


def brute_force_knn(q: KnnQuery, store: Store) -> Tuple[List[int], List[float]]:
    """Exact top-k by sorting every trajectory's distance, ties by tuple id."""
    scored: Dict[int, float] = {}
    for tid, traj in store.items():
        try:
            scored[tid] = nearest_approach_distance(traj, (q.x, q.y), q.period)
        except EmptyRestrictionError:
            continue
    ranked = sorted(scored.items(), key=lambda kv: (kv[1], kv[0]))[: q.k]
    return [tid for tid, _ in ranked], [d for _, d in ranked]
