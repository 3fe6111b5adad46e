"""
TrajGiST — Split Configuration
===============================
Validated parameters for the ExtractValue step.
"""

from enum import Enum

from pydantic import BaseModel, Field


class SplitAlgorithm(str, Enum):
    NONE = "none"
    EQUI = "equi"
    SEG = "seg"
    MERGE = "merge"
    ADAPT = "adapt"
    LINEAR = "linear"


class SplitConfig(BaseModel):
    """
    Splitting algorithm and its parameters.

    k  : box count (equi, merge)
    m  : segments per box (seg, adapt)
    qx, qy, qt : expected query extents (linear); qt in seconds
    rel_pad, time_scale : padded-volume measure, see BoxMetric
    """
    algorithm: SplitAlgorithm = SplitAlgorithm.NONE
    k: int = Field(10, ge=1)
    m: int = Field(10, ge=1)
    qx: float = Field(0.0, ge=0)
    qy: float = Field(0.0, ge=0)
    qt: float = Field(0.0, ge=0)
    rel_pad: float = Field(1e-6, ge=0)
    time_scale: float = Field(1.0, gt=0)

    model_config = {"frozen": True}

    @property
    def label(self) -> str:
        """Short name used in reports and logs."""
        algo = self.algorithm
        if algo in (SplitAlgorithm.EQUI, SplitAlgorithm.MERGE):
            return f"{algo.value}(k={self.k})"
        if algo in (SplitAlgorithm.SEG, SplitAlgorithm.ADAPT):
            return f"{algo.value}(m={self.m})"
        if algo is SplitAlgorithm.LINEAR:
            return f"linear(q={self.qx:g},{self.qy:g},{self.qt:g})"
        return algo.value
