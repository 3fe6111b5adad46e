"""
TrajGiST — Spatio-Temporal Box Algebra
=======================================
Axis-aligned boxes over (x, y, t), periods and query regions, plus the
closed-interval predicates, union, padded volume and lower-bound distance
used by every index keyset.

Query boxes may leave time unbounded (tmin=-inf, tmax=+inf); boxes built
from data are always finite.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from .errors import InvalidParameterError

INF = math.inf


# ── Value types ───────────────────────────────────────────
@dataclass(frozen=True, order=True)
class STBox:
    """Spatio-temporal bounding box with closed extents."""
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    tmin: float
    tmax: float

    def __post_init__(self):
        for name in ("xmin", "xmax", "ymin", "ymax"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"STBox.{name} must be finite")
        if math.isnan(self.tmin) or math.isnan(self.tmax):
            raise InvalidParameterError("STBox time bounds must not be NaN")
        if self.xmin > self.xmax or self.ymin > self.ymax or self.tmin > self.tmax:
            raise InvalidParameterError(f"STBox bounds out of order: {self}")

    # ── Constructors ──────────────────────────────────────
    @classmethod
    def around_point(
        cls,
        x: float,
        y: float,
        eps: float = 0.0,
        period: Optional["Period"] = None,
    ) -> "STBox":
        """Box around a point, widened by eps; time unbounded without a period."""
        tmin, tmax = (period.tstart, period.tend) if period else (-INF, INF)
        return cls(x - eps, x + eps, y - eps, y + eps, tmin, tmax)

    @classmethod
    def from_region(cls, region: "Region", period: Optional["Period"] = None) -> "STBox":
        tmin, tmax = (period.tstart, period.tend) if period else (-INF, INF)
        return cls(region.xmin, region.xmax, region.ymin, region.ymax, tmin, tmax)

    # ── Derived values ────────────────────────────────────
    @property
    def centroid(self) -> Tuple[float, float, float]:
        return (
            (self.xmin + self.xmax) / 2,
            (self.ymin + self.ymax) / 2,
            (self.tmin + self.tmax) / 2,
        )

    @property
    def is_time_bounded(self) -> bool:
        return math.isfinite(self.tmin) and math.isfinite(self.tmax)

    def as_tuple(self) -> Tuple[float, ...]:
        return (self.xmin, self.xmax, self.ymin, self.ymax, self.tmin, self.tmax)


@dataclass(frozen=True)
class Period:
    """Closed time interval [tstart, tend]."""
    tstart: float
    tend: float

    def __post_init__(self):
        if not (math.isfinite(self.tstart) and math.isfinite(self.tend)):
            raise InvalidParameterError("Period bounds must be finite")
        if self.tstart > self.tend:
            raise InvalidParameterError(f"Period out of order: {self}")

    @classmethod
    def instant(cls, t: float) -> "Period":
        return cls(t, t)


@dataclass(frozen=True)
class Region:
    """Axis-aligned query rectangle."""
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.xmin, self.xmax, self.ymin, self.ymax)):
            raise InvalidParameterError("Region bounds must be finite")
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise InvalidParameterError(f"Region out of order: {self}")

    def contains_point(self, x: float, y: float) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax


# ── Predicates (closed intervals) ─────────────────────────
def stbox_overlaps(a: STBox, b: STBox) -> bool:
    return (
        a.xmin <= b.xmax and b.xmin <= a.xmax
        and a.ymin <= b.ymax and b.ymin <= a.ymax
        and a.tmin <= b.tmax and b.tmin <= a.tmax
    )


def stbox_contains(a: STBox, b: STBox) -> bool:
    """True when every extent of b lies within a."""
    return (
        a.xmin <= b.xmin and b.xmax <= a.xmax
        and a.ymin <= b.ymin and b.ymax <= a.ymax
        and a.tmin <= b.tmin and b.tmax <= a.tmax
    )


def stbox_left(a: STBox, b: STBox) -> bool:
    return a.xmax < b.xmin


def stbox_right(a: STBox, b: STBox) -> bool:
    return a.xmin > b.xmax


# ── Union ─────────────────────────────────────────────────
def stbox_union(a: STBox, b: STBox) -> STBox:
    return STBox(
        min(a.xmin, b.xmin), max(a.xmax, b.xmax),
        min(a.ymin, b.ymin), max(a.ymax, b.ymax),
        min(a.tmin, b.tmin), max(a.tmax, b.tmax),
    )


def stbox_union_all(boxes: Iterable[STBox]) -> STBox:
    it = iter(boxes)
    try:
        acc = next(it)
    except StopIteration:
        raise InvalidParameterError("union of an empty box set") from None
    xmin, xmax, ymin, ymax, tmin, tmax = acc.as_tuple()
    for b in it:
        xmin, xmax = min(xmin, b.xmin), max(xmax, b.xmax)
        ymin, ymax = min(ymin, b.ymin), max(ymax, b.ymax)
        tmin, tmax = min(tmin, b.tmin), max(tmax, b.tmax)
    return STBox(xmin, xmax, ymin, ymax, tmin, tmax)


# ── Volume ────────────────────────────────────────────────
@dataclass(frozen=True)
class BoxMetric:
    """
    Padded volume measure.

    Each extent is padded so degenerate boxes (a straight east-west trip has
    zero y-extent) still order merge and penalty candidates strictly.
    Time extents are multiplied by ``time_scale`` before padding.
    """
    pad_x: float = 0.0
    pad_y: float = 0.0
    pad_t: float = 0.0
    time_scale: float = 1.0

    def __post_init__(self):
        if min(self.pad_x, self.pad_y, self.pad_t) < 0:
            raise InvalidParameterError("padding must be >= 0")
        if not self.time_scale > 0:
            raise InvalidParameterError("time_scale must be > 0")

    @classmethod
    def for_extent(
        cls,
        extent: STBox,
        rel_pad: float = 1e-6,
        time_scale: float = 1.0,
    ) -> "BoxMetric":
        """Padding proportional to a dataset extent; zero extents get rel_pad itself."""
        if rel_pad < 0:
            raise InvalidParameterError("rel_pad must be >= 0")

        def pad(width: float) -> float:
            return rel_pad * width if width > 0 else rel_pad

        return cls(
            pad_x=pad(extent.xmax - extent.xmin),
            pad_y=pad(extent.ymax - extent.ymin),
            pad_t=pad((extent.tmax - extent.tmin) * time_scale),
            time_scale=time_scale,
        )

    def volume(self, box: STBox) -> float:
        return (
            (box.xmax - box.xmin + self.pad_x)
            * (box.ymax - box.ymin + self.pad_y)
            * ((box.tmax - box.tmin) * self.time_scale + self.pad_t)
        )

    def enlargement(self, a: STBox, b: STBox) -> float:
        """Volume growth of a when extended to cover b."""
        return self.volume(stbox_union(a, b)) - self.volume(a)


UNPADDED = BoxMetric()


def stbox_volume(a: STBox, metric: BoxMetric = UNPADDED) -> float:
    return metric.volume(a)


def stbox_enlargement(a: STBox, b: STBox, metric: BoxMetric = UNPADDED) -> float:
    return metric.enlargement(a, b)


# ── Distance ──────────────────────────────────────────────
def stbox_min_distance(a: STBox, q: STBox) -> float:
    """
    Spatial lower bound between a data box and a query box.

    Returns +inf when the time extents are disjoint: the query period both
    filters and scopes the distance.
    """
    if a.tmin > q.tmax or q.tmin > a.tmax:
        return INF
    dx = max(a.xmin - q.xmax, q.xmin - a.xmax, 0.0)
    dy = max(a.ymin - q.ymax, q.ymin - a.ymax, 0.0)
    return math.hypot(dx, dy)
