"""
TrajGiST — Trajectory Model & Exact Predicates
===============================================
A trajectory is a sequence of timestamped 2D positions with linear
interpolation between consecutive instants. This module provides the
refinement-side operations: interpolation, restriction to a period,
region / point intersection and nearest-approach distance.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import EmptyRestrictionError, InvalidParameterError, OutOfDomainError
from .geometry import Period, Region, STBox

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


@dataclass(frozen=True)
class Instant:
    """Position-timestamp pair p@t."""
    x: float
    y: float
    t: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.t)):
            raise InvalidParameterError(f"Instant fields must be finite: {self}")


@dataclass(frozen=True)
class TrajectorySequence:
    """
    Ordered instants of one moving object.

    Timestamps are strictly increasing; a sequence of n instants has
    n - 1 segments.
    """
    tuple_id: int
    instants: Tuple[Instant, ...]

    def __post_init__(self):
        if not isinstance(self.instants, tuple):
            object.__setattr__(self, "instants", tuple(self.instants))
        if not self.instants:
            raise InvalidParameterError(f"trajectory {self.tuple_id} has no instants")
        for prev, cur in zip(self.instants, self.instants[1:]):
            if not prev.t < cur.t:
                raise InvalidParameterError(
                    f"trajectory {self.tuple_id}: timestamps not strictly increasing "
                    f"({prev.t} -> {cur.t})"
                )

    @classmethod
    def from_arrays(
        cls,
        tuple_id: int,
        xs: Sequence[float],
        ys: Sequence[float],
        ts: Sequence[float],
    ) -> "TrajectorySequence":
        return cls(
            tuple_id,
            tuple(Instant(float(x), float(y), float(t)) for x, y, t in zip(xs, ys, ts)),
        )

    # ── Cached array views ────────────────────────────────
    @cached_property
    def xs(self) -> np.ndarray:
        return np.fromiter((i.x for i in self.instants), dtype=float, count=len(self.instants))

    @cached_property
    def ys(self) -> np.ndarray:
        return np.fromiter((i.y for i in self.instants), dtype=float, count=len(self.instants))

    @cached_property
    def ts(self) -> np.ndarray:
        return np.fromiter((i.t for i in self.instants), dtype=float, count=len(self.instants))

    @property
    def num_instants(self) -> int:
        return len(self.instants)

    @property
    def num_segments(self) -> int:
        return len(self.instants) - 1

    @property
    def start(self) -> float:
        return self.instants[0].t

    @property
    def end(self) -> float:
        return self.instants[-1].t


# ── Interpolation ─────────────────────────────────────────
def position_at(traj: TrajectorySequence, t: float) -> Point:
    """Linearly interpolated position at time t."""
    if not traj.start <= t <= traj.end:
        raise OutOfDomainError(
            f"t={t} outside [{traj.start}, {traj.end}] of trajectory {traj.tuple_id}"
        )
    i = int(np.searchsorted(traj.ts, t, side="right")) - 1
    a = traj.instants[i]
    if a.t == t or i == traj.num_segments:
        return (a.x, a.y)
    b = traj.instants[i + 1]
    span = b.t - a.t
    x = (a.x * (b.t - t) + b.x * (t - a.t)) / span
    y = (a.y * (b.t - t) + b.y * (t - a.t)) / span
    # keep rounding from leaving the segment's box
    return (
        min(max(x, min(a.x, b.x)), max(a.x, b.x)),
        min(max(y, min(a.y, b.y)), max(a.y, b.y)),
    )


# ── Bounding boxes ────────────────────────────────────────
def run_bbox(traj: TrajectorySequence, first: int, last: int) -> STBox:
    """Box over instants first..last (inclusive)."""
    xs = traj.xs[first:last + 1]
    ys = traj.ys[first:last + 1]
    return STBox(
        float(xs.min()), float(xs.max()),
        float(ys.min()), float(ys.max()),
        traj.instants[first].t, traj.instants[last].t,
    )


def bbox(traj: TrajectorySequence) -> STBox:
    return run_bbox(traj, 0, traj.num_instants - 1)


def segment_bbox(traj: TrajectorySequence, i: int) -> STBox:
    if not 0 <= i < traj.num_segments:
        raise OutOfDomainError(
            f"segment {i} out of range for {traj.num_segments} segments"
        )
    a, b = traj.instants[i], traj.instants[i + 1]
    return STBox(min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y), a.t, b.t)


# ── Restriction ───────────────────────────────────────────
def at_time(traj: TrajectorySequence, period: Period) -> Optional[TrajectorySequence]:
    """
    Sub-trajectory restricted to the period, or None when they are disjoint.

    Boundary instants falling inside a segment are synthesised by
    interpolation.
    """
    if period.tend < traj.start or period.tstart > traj.end:
        return None
    lo = max(period.tstart, traj.start)
    hi = min(period.tend, traj.end)
    if lo == traj.start and hi == traj.end:
        return traj

    x, y = position_at(traj, lo)
    out = [Instant(x, y, lo)]
    first = int(np.searchsorted(traj.ts, lo, side="right"))
    last = int(np.searchsorted(traj.ts, hi, side="left"))
    out.extend(traj.instants[first:last])
    if hi > lo:
        x, y = position_at(traj, hi)
        out.append(Instant(x, y, hi))
    return TrajectorySequence(traj.tuple_id, tuple(out))


# ── Exact spatial predicates ──────────────────────────────
def _segment_hits_region(x0: float, y0: float, x1: float, y1: float, r: Region) -> bool:
    """Liang-Barsky clip of segment p0→p1 against the closed rectangle."""
    dx, dy = x1 - x0, y1 - y0
    u0, u1 = 0.0, 1.0
    for p, q in (
        (-dx, x0 - r.xmin),
        (dx, r.xmax - x0),
        (-dy, y0 - r.ymin),
        (dy, r.ymax - y0),
    ):
        if p == 0:
            if q < 0:
                return False
            continue
        u = q / p
        if p < 0:
            if u > u1:
                return False
            u0 = max(u0, u)
        else:
            if u < u0:
                return False
            u1 = min(u1, u)
    return True


def eintersects_region(traj: TrajectorySequence, region: Region) -> bool:
    """True iff the spatial path ever touches the closed rectangle."""
    xs, ys = traj.xs, traj.ys
    if traj.num_segments == 0:
        return region.contains_point(float(xs[0]), float(ys[0]))

    # Segment boxes that miss the region cannot intersect it
    lo_x, hi_x = np.minimum(xs[:-1], xs[1:]), np.maximum(xs[:-1], xs[1:])
    lo_y, hi_y = np.minimum(ys[:-1], ys[1:]), np.maximum(ys[:-1], ys[1:])
    hits = (
        (lo_x <= region.xmax) & (hi_x >= region.xmin)
        & (lo_y <= region.ymax) & (hi_y >= region.ymin)
    )
    for i in np.flatnonzero(hits):
        if _segment_hits_region(xs[i], ys[i], xs[i + 1], ys[i + 1], region):
            return True
    return False


def _point_segment_distances(traj: TrajectorySequence, q: Point) -> np.ndarray:
    """Euclidean distance from q to every segment (or to the single instant)."""
    qx, qy = q
    xs, ys = traj.xs, traj.ys
    if traj.num_segments == 0:
        return np.array([math.hypot(xs[0] - qx, ys[0] - qy)])

    ax, ay = xs[:-1], ys[:-1]
    dx, dy = xs[1:] - ax, ys[1:] - ay
    len2 = dx * dx + dy * dy
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(len2 > 0, ((qx - ax) * dx + (qy - ay) * dy) / len2, 0.0)
    u = np.clip(u, 0.0, 1.0)
    return np.hypot(ax + u * dx - qx, ay + u * dy - qy)


def nearest_approach_distance(
    traj: TrajectorySequence,
    q: Point,
    period: Optional[Period] = None,
) -> float:
    """Smallest distance between q and the (optionally restricted) path."""
    if period is not None:
        restricted = at_time(traj, period)
        if restricted is None:
            raise EmptyRestrictionError(
                f"trajectory {traj.tuple_id} is undefined during {period}"
            )
        traj = restricted
    return float(_point_segment_distances(traj, q).min())


def eintersects_point(traj: TrajectorySequence, q: Point, eps: float = 0.0) -> bool:
    """True iff the path passes within eps of q (boundary inclusive)."""
    if eps < 0:
        raise InvalidParameterError("eps must be >= 0")
    return nearest_approach_distance(traj, q) <= eps
