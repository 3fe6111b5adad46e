"""
TrajGiST — Box Operators & Consistent Strategies
=================================================
Each operator has a leaf test (entry box vs query box) and an inner-node
test that may only return False when no entry below the node can pass the
leaf test.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict

from ..core.geometry import (
    STBox,
    stbox_contains,
    stbox_left,
    stbox_overlaps,
    stbox_right,
)

BoxTest = Callable[[STBox, STBox], bool]


class BoxOperator(str, Enum):
    OVERLAPS = "overlaps"
    CONTAINS = "contains"
    CONTAINED_BY = "contained_by"
    LEFT = "left"
    RIGHT = "right"
    DISJOINT = "disjoint"


class OperatorClass(str, Enum):
    EXISTS_MATCH = "exists_match"     # some entry must match
    ALL_MATCH = "all_match"           # every entry must match


@dataclass(frozen=True)
class Strategy:
    """Consistent method for one operator."""
    operator: BoxOperator
    leaf: BoxTest
    inner: BoxTest

    def __call__(self, box: STBox, query: STBox, is_leaf: bool = True) -> bool:
        return (self.leaf if is_leaf else self.inner)(box, query)


def _contained_by(a: STBox, q: STBox) -> bool:
    return stbox_contains(q, a)


def _disjoint(a: STBox, q: STBox) -> bool:
    return not stbox_overlaps(a, q)


def _may_hold_disjoint(node: STBox, q: STBox) -> bool:
    # every entry of a node inside q overlaps q
    return not stbox_contains(q, node)


def _may_hold_left(node: STBox, q: STBox) -> bool:
    return node.xmin < q.xmin


def _may_hold_right(node: STBox, q: STBox) -> bool:
    return node.xmax > q.xmax


STRATEGIES: Dict[BoxOperator, Strategy] = {
    BoxOperator.OVERLAPS: Strategy(BoxOperator.OVERLAPS, stbox_overlaps, stbox_overlaps),
    BoxOperator.CONTAINS: Strategy(BoxOperator.CONTAINS, stbox_contains, stbox_contains),
    BoxOperator.CONTAINED_BY: Strategy(BoxOperator.CONTAINED_BY, _contained_by, stbox_overlaps),
    BoxOperator.LEFT: Strategy(BoxOperator.LEFT, stbox_left, _may_hold_left),
    BoxOperator.RIGHT: Strategy(BoxOperator.RIGHT, stbox_right, _may_hold_right),
    BoxOperator.DISJOINT: Strategy(BoxOperator.DISJOINT, _disjoint, _may_hold_disjoint),
}

OPERATOR_CLASSES: Dict[BoxOperator, OperatorClass] = {
    BoxOperator.OVERLAPS: OperatorClass.EXISTS_MATCH,
    BoxOperator.CONTAINS: OperatorClass.EXISTS_MATCH,
    BoxOperator.CONTAINED_BY: OperatorClass.ALL_MATCH,
    BoxOperator.LEFT: OperatorClass.ALL_MATCH,
    BoxOperator.RIGHT: OperatorClass.ALL_MATCH,
    BoxOperator.DISJOINT: OperatorClass.ALL_MATCH,
}


def strategy_for(op: BoxOperator) -> Strategy:
    return STRATEGIES[BoxOperator(op)]
