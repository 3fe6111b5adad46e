# TrajGiST — Core Package (trajectory model and box algebra)
from .errors import (
    CsvParseError,
    EmptyRestrictionError,
    IntegrityError,
    InvalidParameterError,
    OutOfDomainError,
    TrajIndexError,
)
from .geometry import (
    BoxMetric,
    Period,
    Region,
    STBox,
    stbox_contains,
    stbox_enlargement,
    stbox_left,
    stbox_min_distance,
    stbox_overlaps,
    stbox_right,
    stbox_union,
    stbox_union_all,
    stbox_volume,
)
from .trajectory import (
    Instant,
    TrajectorySequence,
    at_time,
    bbox,
    eintersects_point,
    eintersects_region,
    nearest_approach_distance,
    position_at,
    run_bbox,
    segment_bbox,
)

__all__ = [
    "CsvParseError", "EmptyRestrictionError", "IntegrityError",
    "InvalidParameterError", "OutOfDomainError", "TrajIndexError",
    "BoxMetric", "Period", "Region", "STBox",
    "stbox_contains", "stbox_enlargement", "stbox_left", "stbox_min_distance",
    "stbox_overlaps", "stbox_right", "stbox_union", "stbox_union_all", "stbox_volume",
    "Instant", "TrajectorySequence", "at_time", "bbox", "eintersects_point",
    "eintersects_region", "nearest_approach_distance", "position_at",
    "run_bbox", "segment_bbox",
]
