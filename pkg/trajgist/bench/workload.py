"""
TrajGiST — Benchmark Workloads
===============================
Random query sets modelled on the classic moving-object benchmark queries:

  point          — which trajectories passed a point
  point_instant  — which trajectories were at a point at an instant
  region_period  — which trajectories crossed a region during a period
  region         — which trajectories ever crossed a region
  knn            — the k trajectories passing closest to a point
  knn_period     — the same, restricted to a period

Points and instants are drawn from the data itself so most queries have
answers; regions and KNN points are uniform over the data extent.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import List, Mapping, Tuple, Union

import numpy as np
import yaml
from pydantic import BaseModel, Field

from ..core.geometry import Period, Region, STBox
from ..core.trajectory import TrajectorySequence, position_at
from ..query.engine import KnnQuery, RangeQuery

logger = logging.getLogger(__name__)


class QueryKind(str, Enum):
    POINT = "point"
    POINT_INSTANT = "point_instant"
    REGION_PERIOD = "region_period"
    REGION = "region"
    KNN = "knn"
    KNN_PERIOD = "knn_period"

    @property
    def is_knn(self) -> bool:
        return self in (QueryKind.KNN, QueryKind.KNN_PERIOD)


class WorkloadSpec(BaseModel):
    kinds: List[QueryKind] = Field(default_factory=lambda: list(QueryKind))
    queries_per_kind: int = Field(20, ge=1)
    eps: float = Field(1.0, gt=0, description="point tolerance")
    region_size: float = Field(200.0, gt=0, description="side of query regions")
    period_length: float = Field(3600.0, gt=0, description="seconds")
    k: int = Field(5, ge=1)
    seed: int = 7


Query = Union[RangeQuery, KnnQuery]


def load_workload(path: Union[str, Path]) -> WorkloadSpec:
    with open(path, "r", encoding="utf-8") as f:
        return WorkloadSpec.model_validate(yaml.safe_load(f) or {})


# ── Sampling helpers ──────────────────────────────────────
class _Sampler:
    def __init__(self, spec: WorkloadSpec, store: Mapping[int, TrajectorySequence], extent: STBox):
        self.spec = spec
        self.extent = extent
        self.trajs = [store[k] for k in sorted(store)]
        self.rng = np.random.default_rng(spec.seed)

    def data_instant(self) -> Tuple[float, float, float]:
        traj = self.trajs[int(self.rng.integers(len(self.trajs)))]
        t = float(self.rng.uniform(traj.start, traj.end))
        x, y = position_at(traj, t)
        return x, y, t

    def uniform_point(self) -> Tuple[float, float]:
        e = self.extent
        return float(self.rng.uniform(e.xmin, e.xmax)), float(self.rng.uniform(e.ymin, e.ymax))

    def region(self) -> Region:
        half = self.spec.region_size / 2
        cx, cy = self.uniform_point()
        return Region(cx - half, cx + half, cy - half, cy + half)

    def period(self) -> Period:
        e = self.extent
        latest = max(e.tmin, e.tmax - self.spec.period_length)
        start = float(self.rng.uniform(e.tmin, latest)) if latest > e.tmin else e.tmin
        return Period(start, start + self.spec.period_length)


def build_queries(
    spec: WorkloadSpec,
    store: Mapping[int, TrajectorySequence],
    extent: STBox,
) -> List[Tuple[QueryKind, Query]]:
    """Deterministic list of (kind, query), grouped by kind in the order of spec.kinds."""
    if not store:
        return []
    s = _Sampler(spec, store, extent)
    queries: List[Tuple[QueryKind, Query]] = []
    for kind in spec.kinds:
        for _ in range(spec.queries_per_kind):
            if kind is QueryKind.POINT:
                x, y, _t = s.data_instant()
                q = RangeQuery.point(x, y, spec.eps)
            elif kind is QueryKind.POINT_INSTANT:
                x, y, t = s.data_instant()
                q = RangeQuery.point_at(x, y, t, spec.eps)
            elif kind is QueryKind.REGION_PERIOD:
                q = RangeQuery.region(s.region(), s.period())
            elif kind is QueryKind.REGION:
                q = RangeQuery.region(s.region())
            elif kind is QueryKind.KNN:
                x, y = s.uniform_point()
                q = KnnQuery(x, y, spec.k)
            else:
                x, y = s.uniform_point()
                q = KnnQuery(x, y, spec.k, s.period())
            queries.append((kind, q))
    logger.debug("Built %d queries over %d kinds", len(queries), len(spec.kinds))
    return queries
