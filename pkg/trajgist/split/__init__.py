# TrajGiST — Split Package (ExtractValue implementations)
from .algorithms import (
    adapt_split,
    equi_split,
    extract_value,
    linear_split,
    merge_split,
    seg_split,
)
from .config import SplitAlgorithm, SplitConfig
from .oracle import optimal_linear_cost, optimal_split_volume, total_cost, total_volume

__all__ = [
    "adapt_split", "equi_split", "extract_value", "linear_split", "merge_split",
    "seg_split", "SplitAlgorithm", "SplitConfig", "optimal_linear_cost",
    "optimal_split_volume", "total_cost", "total_volume",
]
