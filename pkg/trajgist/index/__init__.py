# TrajGiST — Index Package (multi-entry GiST and SP-GiST trees)
from .base import IndexEntry, IndexKind, IndexSettings, Node, SearchTree
from .factory import create_index
from .megist import KeysetBalanced, MGiSTTree, RTreeKeyset
from .mespgist import KDKeyset, KeysetSP, MSPGiSTTree, QuadKeyset, SPNode
from .operators import (
    OPERATOR_CLASSES,
    BoxOperator,
    OperatorClass,
    Strategy,
    strategy_for,
)

__all__ = [
    "IndexEntry", "IndexKind", "IndexSettings", "Node", "SearchTree",
    "create_index", "KeysetBalanced", "MGiSTTree", "RTreeKeyset",
    "KDKeyset", "KeysetSP", "MSPGiSTTree", "QuadKeyset", "SPNode",
    "OPERATOR_CLASSES", "BoxOperator", "OperatorClass", "Strategy", "strategy_for",
]
