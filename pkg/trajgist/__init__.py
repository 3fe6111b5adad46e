# TrajGiST — Multi-Entry Trajectory Indexing
# Trajectories are split into several bounding boxes before insertion into
# balanced (R-Tree) or space-partitioning (Quad/KD-Tree) search trees, and
# queried with deduplicating range search and exact KNN.
from .core import Instant, Period, Region, STBox, TrajectorySequence
from .index import IndexKind, IndexSettings, create_index
from .query import KnnQuery, RangeQuery, knn, search
from .split import SplitAlgorithm, SplitConfig, extract_value

__version__ = "0.1.0"

__all__ = [
    "Instant", "Period", "Region", "STBox", "TrajectorySequence",
    "IndexKind", "IndexSettings", "create_index",
    "KnnQuery", "RangeQuery", "knn", "search",
    "SplitAlgorithm", "SplitConfig", "extract_value",
]
