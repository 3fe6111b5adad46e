"""
TrajGiST — Search Tree Abstraction Layer
=========================================
Common base for the balanced (MGiST) and space-partitioning (MSP-GiST)
multi-entry trees, so query code can swap index kinds without changes.

Leaves hold (box, tuple id) entries; many entries may share one tuple id.
Every node stores the exact union box of everything beneath it, which is
what Consistent and Distance are evaluated against during traversal.
"""

import heapq
import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, Field

from ..core.geometry import STBox, stbox_min_distance
from .operators import Strategy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndexEntry:
    """Entry predicate (a box) and the identifier of the tuple it points to."""
    box: STBox
    tuple_id: int


class IndexKind(str, Enum):
    RTREE = "rtree"
    QUADTREE = "quadtree"
    KDTREE = "kdtree"


class IndexSettings(BaseModel):
    """Node capacity and fill factor (R-Tree) and bucket size (Quad/KD-Tree)."""
    node_capacity: int = Field(64, ge=2)
    fill_factor: float = Field(0.4, gt=0, le=0.5)
    bucket_size: int = Field(16, ge=1)

    model_config = {"frozen": True}


class Node:
    """Tree node; a leaf holds entries, an inner node holds child nodes."""

    __slots__ = ("box", "entries", "children", "is_leaf")

    def __init__(self, is_leaf: bool = True):
        self.box: Optional[STBox] = None
        self.entries: List[IndexEntry] = []
        self.children: List["Node"] = []
        self.is_leaf = is_leaf

    def __repr__(self) -> str:
        size = len(self.entries) if self.is_leaf else len(self.children)
        kind = "leaf" if self.is_leaf else "inner"
        return f"<{self.__class__.__name__} {kind} size={size} box={self.box}>"


class SearchTree(ABC):
    """
    Abstract multi-entry search tree.

    Every concrete tree MUST implement:
      • _insert_one()  — place one entry and keep node boxes exact
      • validate()     — raise IntegrityError on a broken invariant

    The base class provides de-duplicated batch insertion, Consistent-driven
    depth-first search and best-first nearest-neighbour traversal.
    """

    kind: IndexKind

    def __init__(self, name: str):
        self.name = name
        self.root: Node = self._new_root()
        self._stored: Set[IndexEntry] = set()
        logger.debug("Index [%s] initialised", name)

    # ── Abstract methods ──────────────────────────────────
    @abstractmethod
    def _new_root(self) -> Node:
        ...

    @abstractmethod
    def _insert_one(self, entry: IndexEntry) -> None:
        ...

    @abstractmethod
    def validate(self) -> None:
        """Check every structural invariant; raise IntegrityError on failure."""
        ...

    # ── Insertion ─────────────────────────────────────────
    def insert(self, entries: Iterable[IndexEntry]) -> "SearchTree":
        """Insert entries one at a time; an identical (box, tuple id) pair is stored once."""
        for entry in entries:
            if entry in self._stored:
                continue
            self._stored.add(entry)
            self._insert_one(entry)
        return self

    # ── Search ────────────────────────────────────────────
    def visit(self, query: STBox, consistent: Strategy) -> Iterator[IndexEntry]:
        """Yield every leaf entry consistent with the query, pruning inner nodes."""
        if self.root.box is None:
            return
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not consistent(node.box, query, is_leaf=False):
                continue
            if node.is_leaf:
                for entry in node.entries:
                    if consistent(entry.box, query, is_leaf=True):
                        yield entry
            else:
                stack.extend(reversed(node.children))

    def visit_nearest(self, query: STBox) -> Iterator[Tuple[IndexEntry, float]]:
        """
        Best-first traversal yielding (entry, box distance) in nondecreasing order.

        Nodes are expanded before entries at equal distance, so entries with
        equal distance come out ordered by (tuple id, box).
        """
        if self.root.box is None:
            return
        seq = itertools.count()
        heap: list = [(self.distance(self.root.box, query), 0, next(seq), self.root)]
        while heap:
            item = heapq.heappop(heap)
            dist, kind = item[0], item[1]
            if kind == 1:
                yield item[-1], dist
                continue
            node = item[-1]
            if node.is_leaf:
                for entry in node.entries:
                    d = self.distance(entry.box, query)
                    heapq.heappush(
                        heap,
                        (d, 1, entry.tuple_id, entry.box.as_tuple(), next(seq), entry),
                    )
            else:
                for child in node.children:
                    heapq.heappush(heap, (self.distance(child.box, query), 0, next(seq), child))

    def distance(self, box: STBox, query: STBox) -> float:
        return stbox_min_distance(box, query)

    # ── Introspection ─────────────────────────────────────
    def iter_nodes(self) -> Iterator[Node]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children)

    def iter_entries(self) -> Iterator[IndexEntry]:
        for node in self.iter_nodes():
            if node.is_leaf:
                yield from node.entries

    @property
    def entry_count(self) -> int:
        return len(self._stored)

    @property
    def node_count(self) -> int:
        return sum(1 for _ in self.iter_nodes())

    @property
    def height(self) -> int:
        """Longest root-to-leaf path, counted in nodes."""
        best = 0
        stack = [(self.root, 1)]
        while stack:
            node, depth = stack.pop()
            if node.is_leaf:
                best = max(best, depth)
            else:
                stack.extend((c, depth + 1) for c in node.children)
        return best

    def __len__(self) -> int:
        return self.entry_count

    def __repr__(self) -> str:
        return (
            f"<{self.__class__.__name__} name={self.name} "
            f"entries={self.entry_count} nodes={self.node_count}>"
        )
