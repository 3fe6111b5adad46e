"""
TrajGiST — Balanced Multi-Entry Search Tree (MGiST)
====================================================
GiST-style balanced tree with a pluggable keyset. Entries are inserted
sequentially: descend by minimum penalty, split overfull nodes with the
keyset's PickSplit, and keep every inner box the exact union of its
children. The R-Tree keyset uses padded-volume enlargement as penalty and
Guttman's quadratic split.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import List, Sequence, Tuple

from ..core.errors import IntegrityError
from ..core.geometry import (
    BoxMetric,
    STBox,
    stbox_min_distance,
    stbox_union,
    stbox_union_all,
)
from .base import IndexEntry, IndexKind, Node, SearchTree
from .operators import Strategy

logger = logging.getLogger(__name__)


class KeysetBalanced(ABC):
    """Key methods of a balanced generalized search tree."""

    def consistent(self, box: STBox, query: STBox, strategy: Strategy, is_leaf: bool) -> bool:
        return strategy(box, query, is_leaf)

    def union(self, boxes: Sequence[STBox]) -> STBox:
        return stbox_union_all(boxes)

    def compress(self, entry: IndexEntry) -> IndexEntry:
        # entries already arrive as boxes from ExtractValue
        return entry

    def distance(self, box: STBox, query: STBox) -> float:
        return stbox_min_distance(box, query)

    def size(self, box: STBox) -> float:
        """Tie-break measure for ChooseSubtree; 0 disables it."""
        return 0.0

    @abstractmethod
    def penalty(self, node_box: STBox, new_box: STBox) -> float:
        ...

    @abstractmethod
    def picksplit(self, boxes: Sequence[STBox], min_fill: int) -> Tuple[List[int], List[int]]:
        """Partition box indexes into two groups of at least min_fill each."""
        ...


class RTreeKeyset(KeysetBalanced):
    """R-Tree key methods over padded volume."""

    def __init__(self, metric: BoxMetric):
        self.metric = metric

    def size(self, box: STBox) -> float:
        return self.metric.volume(box)

    def penalty(self, node_box: STBox, new_box: STBox) -> float:
        return self.metric.enlargement(node_box, new_box)

    def picksplit(self, boxes: Sequence[STBox], min_fill: int) -> Tuple[List[int], List[int]]:
        """Quadratic split: worst pair as seeds, then greatest preference first."""
        volume = self.metric.volume
        n = len(boxes)
        vols = [volume(b) for b in boxes]

        # ① Seeds: the pair wasting the most volume when grouped
        seed_a, seed_b, worst = 0, 1, -math.inf
        for i in range(n):
            for j in range(i + 1, n):
                waste = volume(stbox_union(boxes[i], boxes[j])) - vols[i] - vols[j]
                if waste > worst:
                    seed_a, seed_b, worst = i, j, waste

        groups: Tuple[List[int], List[int]] = ([seed_a], [seed_b])
        covers = [boxes[seed_a], boxes[seed_b]]
        remaining = [i for i in range(n) if i not in (seed_a, seed_b)]

        # ② Assign the rest, forcing the remainder when a side would starve
        while remaining:
            for g in (0, 1):
                if len(groups[g]) + len(remaining) <= min_fill:
                    groups[g].extend(remaining)
                    covers[g] = stbox_union_all([covers[g]] + [boxes[i] for i in remaining])
                    remaining = []
                    break
            if not remaining:
                break

            best_pos, best_diff = 0, -1.0
            grow = (0.0, 0.0)
            for pos, i in enumerate(remaining):
                d0 = self.penalty(covers[0], boxes[i])
                d1 = self.penalty(covers[1], boxes[i])
                if abs(d0 - d1) > best_diff:
                    best_pos, best_diff, grow = pos, abs(d0 - d1), (d0, d1)
            i = remaining.pop(best_pos)

            g = self._pick_group(grow, covers, groups)
            groups[g].append(i)
            covers[g] = stbox_union(covers[g], boxes[i])

        return groups

    def _pick_group(self, grow, covers, groups) -> int:
        if grow[0] != grow[1]:
            return 0 if grow[0] < grow[1] else 1
        v0, v1 = self.size(covers[0]), self.size(covers[1])
        if v0 != v1:
            return 0 if v0 < v1 else 1
        return 0 if len(groups[0]) <= len(groups[1]) else 1


class MGiSTTree(SearchTree):
    """
    Balanced multi-entry tree.

    M (node_capacity) bounds every node; every node except the root holds
    at least ⌈fill_factor·M⌉ children or entries.
    """

    kind = IndexKind.RTREE

    def __init__(
        self,
        keyset: KeysetBalanced,
        node_capacity: int = 64,
        fill_factor: float = 0.4,
        name: str = "rtree",
    ):
        if node_capacity < 2:
            raise ValueError("node_capacity must be >= 2")
        if not 0 < fill_factor <= 0.5:
            raise ValueError("fill_factor must be in (0, 0.5]")
        self.keyset = keyset
        self.capacity = node_capacity
        self.fill_factor = fill_factor
        self.min_fill = max(1, math.ceil(fill_factor * node_capacity))
        super().__init__(name)
        logger.info(
            "MGiST [%s] — M=%d, fill=%.2f (min %d)",
            name, node_capacity, fill_factor, self.min_fill,
        )

    def _new_root(self) -> Node:
        return Node(is_leaf=True)

    def distance(self, box: STBox, query: STBox) -> float:
        return self.keyset.distance(box, query)

    # ── Insertion ─────────────────────────────────────────
    def _insert_one(self, entry: IndexEntry) -> None:
        entry = self.keyset.compress(entry)
        sibling = self._insert_into(self.root, entry)
        if sibling is not None:
            old_root = self.root
            self.root = Node(is_leaf=False)
            self.root.children = [old_root, sibling]
            self.root.box = stbox_union(old_root.box, sibling.box)
            logger.debug("MGiST [%s] root split — height now %d", self.name, self.height)

    def _insert_into(self, node: Node, entry: IndexEntry):
        """Insert below node; return a new sibling when node had to split."""
        node.box = entry.box if node.box is None else stbox_union(node.box, entry.box)
        if node.is_leaf:
            node.entries.append(entry)
            if len(node.entries) > self.capacity:
                return self._split(node)
            return None

        child = self._choose_subtree(node, entry.box)
        sibling = self._insert_into(child, entry)
        if sibling is not None:
            node.children.append(sibling)
            if len(node.children) > self.capacity:
                return self._split(node)
        return None

    def _choose_subtree(self, node: Node, box: STBox) -> Node:
        """Minimum penalty; ties go to the smaller node, then the leftmost."""
        best, best_key = None, None
        for child in node.children:
            key = (self.keyset.penalty(child.box, box), self.keyset.size(child.box))
            if best_key is None or key < best_key:
                best, best_key = child, key
        return best

    def _split(self, node: Node) -> Node:
        items = node.entries if node.is_leaf else node.children
        boxes = [item.box for item in items]
        left_idx, right_idx = self.keyset.picksplit(boxes, self.min_fill)

        sibling = Node(is_leaf=node.is_leaf)
        left = [items[i] for i in left_idx]
        right = [items[i] for i in right_idx]
        if node.is_leaf:
            node.entries, sibling.entries = left, right
        else:
            node.children, sibling.children = left, right
        node.box = self.keyset.union([item.box for item in left])
        sibling.box = self.keyset.union([item.box for item in right])
        return sibling

    # ── Invariants ────────────────────────────────────────
    def validate(self) -> None:
        leaf_depths = set()
        stored = 0
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            items = node.entries if node.is_leaf else node.children
            size = len(items)
            if size > self.capacity:
                raise IntegrityError(f"node holds {size} > M={self.capacity}")
            if node is not self.root and size < self.min_fill:
                raise IntegrityError(f"node holds {size} < min fill {self.min_fill}")
            if node.is_leaf:
                leaf_depths.add(depth)
                stored += size
            else:
                stack.extend((c, depth + 1) for c in node.children)

            # children are checked against their own contents when popped
            boxes = [item.box for item in items]
            if not boxes:
                if node.box is not None:
                    raise IntegrityError("empty node carries a box")
                continue
            if any(b is None for b in boxes):
                raise IntegrityError(f"empty child under node at depth {depth}")
            expected = stbox_union_all(boxes)
            if expected != node.box:
                raise IntegrityError(f"node box {node.box} != union {expected}")

        if len(leaf_depths) > 1:
            raise IntegrityError(f"unbalanced tree: leaf depths {sorted(leaf_depths)}")
        if stored != self.entry_count:
            raise IntegrityError(f"{stored} entries in leaves, {self.entry_count} inserted")
