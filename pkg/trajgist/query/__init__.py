# TrajGiST — Query Package (deduplicating search and exact KNN)
from .engine import (
    BoxOperatorRefine,
    KnnQuery,
    PointAtRefine,
    PointRefine,
    QueryStats,
    RangeQuery,
    RegionPeriodRefine,
    ResultSet,
    brute_force_knn,
    brute_force_search,
    candidate_stats,
    knn,
    search,
)

__all__ = [
    "BoxOperatorRefine", "KnnQuery", "PointAtRefine", "PointRefine", "QueryStats",
    "RangeQuery", "RegionPeriodRefine", "ResultSet", "brute_force_knn",
    "brute_force_search", "candidate_stats", "knn", "search",
]
