"""
TrajGiST — Index Factory
========================
Builds an empty tree of the requested kind from IndexSettings.
"""

import logging
from typing import Optional

from ..core.geometry import UNPADDED, BoxMetric
from .base import IndexKind, IndexSettings, SearchTree
from .megist import MGiSTTree, RTreeKeyset
from .mespgist import KDKeyset, MSPGiSTTree, QuadKeyset

logger = logging.getLogger(__name__)


def create_index(
    kind: IndexKind,
    settings: Optional[IndexSettings] = None,
    metric: Optional[BoxMetric] = None,
) -> SearchTree:
    """
    ``metric`` is only used by the R-Tree penalty; pass one padded to the
    dataset extent so degenerate boxes still compare strictly.
    """
    kind = IndexKind(kind)
    settings = settings or IndexSettings()
    if kind is IndexKind.RTREE:
        return MGiSTTree(
            RTreeKeyset(metric or UNPADDED),
            node_capacity=settings.node_capacity,
            fill_factor=settings.fill_factor,
        )
    if kind is IndexKind.QUADTREE:
        return MSPGiSTTree(QuadKeyset(), kind, bucket_size=settings.bucket_size)
    return MSPGiSTTree(KDKeyset(), kind, bucket_size=settings.bucket_size)
