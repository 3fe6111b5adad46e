"""
TrajGiST — Space-Partitioning Multi-Entry Search Tree (MSP-GiST)
=================================================================
Unbalanced trees that route each entry by the centroid of its box.

  QuadKeyset — 8-way split around the mean centroid (x, y, t octants)
  KDKeyset   — binary split on the median, cycling x → y → t by level

The centroid only decides where an entry lives. Every node also keeps the
union box of all entries below it, and search prunes against that box, so a
box that straddles a split point is still found from either side.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

from ..core.errors import IntegrityError
from ..core.geometry import STBox, stbox_min_distance, stbox_union, stbox_union_all
from .base import IndexEntry, IndexKind, Node, SearchTree

logger = logging.getLogger(__name__)

Centroid = Tuple[float, float, float]


class KeysetSP(ABC):
    """Key methods of a space-partitioning tree."""

    def distance(self, box: STBox, query: STBox) -> float:
        return stbox_min_distance(box, query)

    @abstractmethod
    def choose(self, descriptor: Any, centroid: Centroid, level: int) -> int:
        """Label of the child a centroid is routed to."""
        ...

    @abstractmethod
    def picksplit(self, centroids: Sequence[Centroid], level: int) -> Tuple[Any, List[int]]:
        """Split descriptor for a full leaf and the label of every centroid."""
        ...


class QuadKeyset(KeysetSP):
    """Octree over (x, y, t); ties on a split coordinate go to the low side."""

    def choose(self, descriptor: Centroid, centroid: Centroid, level: int) -> int:
        cx, cy, ct = descriptor
        x, y, t = centroid
        return int(x > cx) | (int(y > cy) << 1) | (int(t > ct) << 2)

    def picksplit(self, centroids: Sequence[Centroid], level: int) -> Tuple[Centroid, List[int]]:
        point = tuple(self._split_value([c[d] for c in centroids]) for d in range(3))
        return point, [self.choose(point, c, level) for c in centroids]

    @staticmethod
    def _split_value(values: List[float]) -> float:
        mean = math.fsum(values) / len(values)
        top = max(values)
        if mean >= top and min(values) < top:
            # rounding pushed the mean onto the maximum
            mean = max(v for v in values if v < top)
        return mean


class KDKeyset(KeysetSP):
    """
    k-d tree over (x, y, t) centroids.

    The splitting dimension is level mod 3. Values <= the median go left.
    When every centroid shares the value along the level's dimension the
    descriptor is None and the node has a single pass-through child.
    """

    def choose(self, descriptor: Optional[float], centroid: Centroid, level: int) -> int:
        if descriptor is None:
            return 0
        return 0 if centroid[level % 3] <= descriptor else 1

    def picksplit(self, centroids: Sequence[Centroid], level: int) -> Tuple[Optional[float], List[int]]:
        dim = level % 3
        values = sorted(c[dim] for c in centroids)
        if values[0] == values[-1]:
            return None, [0] * len(centroids)
        median = values[math.ceil(len(values) / 2) - 1]
        if median == values[-1]:
            # right side would be empty: cut just below the repeated maximum
            median = max(v for v in values if v < median)
        return median, [self.choose(median, c, level) for c in centroids]


class SPNode(Node):
    """Space-partitioning node: a leaf bucket or an inner node with labelled children."""

    __slots__ = ("level", "descriptor", "labels")

    def __init__(self, level: int = 0, is_leaf: bool = True):
        super().__init__(is_leaf)
        self.level = level
        self.descriptor: Any = None
        self.labels: List[int] = []

    def child(self, label: int) -> Optional["SPNode"]:
        for lab, node in zip(self.labels, self.children):
            if lab == label:
                return node
        return None


def _centroid(entry: IndexEntry) -> Centroid:
    return entry.box.centroid


class MSPGiSTTree(SearchTree):
    """
    Multi-entry space-partitioning tree.

    A leaf splits once it holds more than bucket_size entries, unless every
    entry has the same centroid; such a leaf may stay oversized.
    """

    def __init__(
        self,
        keyset: KeysetSP,
        kind: IndexKind,
        bucket_size: int = 16,
        name: Optional[str] = None,
    ):
        if bucket_size < 1:
            raise ValueError("bucket_size must be >= 1")
        self.keyset = keyset
        self.kind = IndexKind(kind)
        self.bucket_size = bucket_size
        super().__init__(name or self.kind.value)
        logger.info("MSP-GiST [%s] — bucket=%d", self.name, bucket_size)

    def _new_root(self) -> SPNode:
        return SPNode(level=0)

    def distance(self, box: STBox, query: STBox) -> float:
        return self.keyset.distance(box, query)

    # ── Insertion ─────────────────────────────────────────
    def _insert_one(self, entry: IndexEntry) -> None:
        centroid = _centroid(entry)
        node: SPNode = self.root
        while True:
            node.box = entry.box if node.box is None else stbox_union(node.box, entry.box)
            if node.is_leaf:
                break
            label = self.keyset.choose(node.descriptor, centroid, node.level)
            child = node.child(label)
            if child is None:
                child = SPNode(level=node.level + 1)
                node.labels.append(label)
                node.children.append(child)
            node = child

        node.entries.append(entry)
        if len(node.entries) > self.bucket_size:
            self._split_leaf(node)

    def _split_leaf(self, node: SPNode) -> None:
        centroids = [_centroid(e) for e in node.entries]
        if all(c == centroids[0] for c in centroids):
            logger.debug(
                "MSP-GiST [%s] leaf at level %d holds %d identical centroids — not split",
                self.name, node.level, len(centroids),
            )
            return

        descriptor, labels = self.keyset.picksplit(centroids, node.level)
        groups: Dict[int, List[IndexEntry]] = {}
        for entry, label in zip(node.entries, labels):
            groups.setdefault(label, []).append(entry)

        node.is_leaf = False
        node.descriptor = descriptor
        node.entries = []
        for label in sorted(groups):
            child = SPNode(level=node.level + 1)
            child.entries = groups[label]
            child.box = stbox_union_all(e.box for e in child.entries)
            node.labels.append(label)
            node.children.append(child)

        for child in node.children:
            if len(child.entries) > self.bucket_size:
                self._split_leaf(child)

    # ── Invariants ────────────────────────────────────────
    def validate(self) -> None:
        stored = 0
        stack: List[SPNode] = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                stored += len(node.entries)
                centroids = [_centroid(e) for e in node.entries]
                if len(node.entries) > self.bucket_size and len(set(centroids)) > 1:
                    raise IntegrityError(
                        f"leaf at level {node.level} holds {len(node.entries)} "
                        f"> bucket {self.bucket_size} with distinct centroids"
                    )
                boxes = [e.box for e in node.entries]
            else:
                if not node.children:
                    raise IntegrityError(f"inner node at level {node.level} has no children")
                if len(set(node.labels)) != len(node.labels):
                    raise IntegrityError(f"duplicate child labels at level {node.level}")
                for label, child in zip(node.labels, node.children):
                    if child.level != node.level + 1:
                        raise IntegrityError(f"child level {child.level} under level {node.level}")
                    for entry in _subtree_entries(child):
                        routed = self.keyset.choose(node.descriptor, _centroid(entry), node.level)
                        if routed != label:
                            raise IntegrityError(
                                f"entry {entry.tuple_id} routed to {routed}, stored under {label}"
                            )
                stack.extend(node.children)
                # children are checked against their own contents when popped
                boxes = [c.box for c in node.children if c.box is not None]
            expected = stbox_union_all(boxes) if boxes else None
            if expected != node.box:
                raise IntegrityError(f"node box {node.box} != union {expected}")

        if stored != self.entry_count:
            raise IntegrityError(f"{stored} entries in leaves, {self.entry_count} inserted")


def _subtree_entries(node: Node):
    stack = [node]
    while stack:
        n = stack.pop()
        if n.is_leaf:
            yield from n.entries
        else:
            stack.extend(n.children)
