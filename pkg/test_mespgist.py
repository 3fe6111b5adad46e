"""Tests for the space-partitioning multi-entry trees (Quad-Tree and KD-Tree)."""

import numpy as np
import pytest

from trajgist.core.errors import IntegrityError
from trajgist.core.geometry import STBox
from trajgist.index import (
    BoxOperator,
    IndexEntry,
    IndexKind,
    IndexSettings,
    KDKeyset,
    MSPGiSTTree,
    QuadKeyset,
    create_index,
    strategy_for,
)


def point_entry(tid, x, y, t, half=0.5):
    return IndexEntry(STBox(x - half, x + half, y - half, y + half, t - half, t + half), tid)


def random_entries(rng, count, span=1000.0, size=30.0):
    out = []
    for i in range(count):
        x, y, t = rng.uniform(0, span, size=3)
        w, h, d = rng.uniform(0, size, size=3)
        out.append(IndexEntry(STBox(x, x + w, y, y + h, t, t + d), int(rng.integers(0, count // 3 + 1))))
    return out


def quadtree(bucket=4):
    return MSPGiSTTree(QuadKeyset(), IndexKind.QUADTREE, bucket_size=bucket)


def kdtree(bucket=4):
    return MSPGiSTTree(KDKeyset(), IndexKind.KDTREE, bucket_size=bucket)


TREES = [quadtree, kdtree]


# =============================================================================
# Keysets
# =============================================================================


class TestQuadKeyset:
    def test_octant_bits(self):
        ks = QuadKeyset()
        centre = (0.0, 0.0, 0.0)
        assert ks.choose(centre, (-1, -1, -1), 0) == 0
        assert ks.choose(centre, (1, -1, -1), 0) == 1
        assert ks.choose(centre, (-1, 1, -1), 0) == 2
        assert ks.choose(centre, (-1, -1, 1), 0) == 4
        assert ks.choose(centre, (1, 1, 1), 0) == 7

    def test_tie_goes_low(self):
        assert QuadKeyset().choose((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), 3) == 0

    def test_picksplit_uses_mean(self):
        centroids = [(0, 0, 0), (2, 4, 6), (4, 8, 12), (10, 0, 2)]
        point, labels = QuadKeyset().picksplit(centroids, 0)
        assert point == pytest.approx((4.0, 3.0, 5.0))
        assert labels == [0, 2 | 4, 2 | 4, 1]

    def test_opposite_corners_use_two_octants(self):
        centroids = [(0.0, 0.0, 5.0)] * 3 + [(10.0, 10.0, 5.0)] * 3
        _, labels = QuadKeyset().picksplit(centroids, 0)
        assert sorted(set(labels)) == [0, 3]

    def test_uniform_centroids_fill_all_octants(self):
        rng = np.random.default_rng(2)
        centroids = [tuple(c) for c in rng.uniform(0, 100, size=(1000, 3))]
        _, labels = QuadKeyset().picksplit(centroids, 0)
        assert set(labels) == set(range(8))

    def test_split_value_below_max(self):
        top = float(np.nextafter(1.0, 2.0))
        values = [1.0, top, top]
        v = QuadKeyset._split_value(values)
        assert v < max(values)


class TestKDKeyset:
    def test_dimension_cycles_with_level(self):
        ks = KDKeyset()
        c = (1.0, 5.0, 9.0)
        assert ks.choose(4.0, c, 0) == 0
        assert ks.choose(4.0, c, 1) == 1
        assert ks.choose(4.0, c, 2) == 1
        assert ks.choose(4.0, c, 3) == 0

    @pytest.mark.parametrize("count", [2, 3, 8, 9])
    def test_left_side_is_ceil_half(self, count):
        centroids = [(float(i), 0.0, 0.0) for i in range(count)]
        median, labels = KDKeyset().picksplit(centroids, 0)
        assert labels.count(0) == -(-count // 2)
        assert median == float(-(-count // 2) - 1)

    def test_repeated_maximum_keeps_right_nonempty(self):
        centroids = [(1.0, 0, 0), (5.0, 0, 0), (5.0, 0, 0), (5.0, 0, 0)]
        median, labels = KDKeyset().picksplit(centroids, 0)
        assert median == 1.0
        assert labels == [0, 1, 1, 1]

    def test_equal_values_give_pass_through(self):
        centroids = [(3.0, float(i), 0.0) for i in range(5)]
        descriptor, labels = KDKeyset().picksplit(centroids, 0)
        assert descriptor is None
        assert labels == [0] * 5
        assert KDKeyset().choose(None, (99.0, 1.0, 1.0), 0) == 0


# =============================================================================
# Insertion and structure
# =============================================================================


class TestStructure:
    @pytest.mark.parametrize("make", TREES)
    def test_leaf_until_bucket_overflows(self, make):
        tree = make(bucket=4)
        tree.insert(point_entry(i, i, i, i) for i in range(4))
        assert tree.root.is_leaf
        tree.insert([point_entry(9, 9, 9, 9)])
        assert not tree.root.is_leaf
        assert tree.height == 2
        tree.validate()

    @pytest.mark.parametrize("make", TREES)
    def test_identical_centroids_stay_in_one_leaf(self, make):
        tree = make(bucket=2)
        tree.insert(point_entry(i, 5, 5, 5, half=0.25 * (i + 1)) for i in range(6))
        assert tree.root.is_leaf
        assert len(tree.root.entries) == 6
        tree.validate()

    def test_kd_pass_through_child(self):
        tree = kdtree(bucket=2)
        tree.insert(point_entry(i, 7.0, float(i), 0.0) for i in range(3))
        root = tree.root
        assert not root.is_leaf
        assert root.descriptor is None
        assert root.labels == [0]
        assert root.children[0].descriptor is not None
        tree.validate()

    def test_quad_split_labels_sorted(self):
        tree = quadtree(bucket=3)
        tree.insert(point_entry(i, x, y, 0) for i, (x, y) in enumerate([(10, 10), (0, 10), (10, 0), (0, 0)]))
        assert tree.root.labels == sorted(tree.root.labels)
        assert len(tree.root.children) == 4

    def test_child_created_on_demand(self):
        tree = quadtree(bucket=3)
        tree.insert(point_entry(i, x, 0, 0) for i, x in enumerate([0, 1, 10, 11]))
        before = len(tree.root.children)
        tree.insert([point_entry(99, 5, 100, 100)])
        assert len(tree.root.children) == before + 1
        tree.validate()

    @pytest.mark.parametrize("make", TREES)
    def test_ten_thousand_random_inserts(self, make):
        rng = np.random.default_rng(21)
        tree = make(bucket=8)
        tree.insert(random_entries(rng, 10_000))
        tree.validate()
        assert tree.entry_count == len(set(tree.iter_entries()))

    def test_skewed_quadtree_deeper_than_recursion_limit(self):
        tree = quadtree(bucket=1)
        tree.insert(point_entry(i, 2.0 ** i, 0.0, 0.0, half=0.0) for i in range(1020))
        assert tree.height == 1020
        assert tree.node_count == 2 * 1020 - 1
        tree.validate()
        assert tree.entry_count == 1020

    def test_validate_detects_misrouted_entry(self):
        tree = kdtree(bucket=2)
        tree.insert(point_entry(i, float(i), 0.0, 0.0) for i in range(4))
        left, right = tree.root.children[0], tree.root.children[-1]
        moved = right.entries.pop() if right.is_leaf else None
        if moved is None:
            pytest.skip("right side split further")
        left.entries.append(moved)
        with pytest.raises(IntegrityError):
            tree.validate()

    @pytest.mark.parametrize("kind", [IndexKind.QUADTREE, IndexKind.KDTREE])
    def test_factory(self, kind):
        tree = create_index(kind, IndexSettings(bucket_size=5))
        assert isinstance(tree, MSPGiSTTree)
        assert tree.kind is kind and tree.bucket_size == 5

    def test_invalid_bucket(self):
        with pytest.raises(ValueError):
            MSPGiSTTree(QuadKeyset(), IndexKind.QUADTREE, bucket_size=0)


# =============================================================================
# Search
# =============================================================================


class TestSearch:
    @pytest.fixture(params=TREES, ids=["quadtree", "kdtree"])
    def populated(self, request):
        rng = np.random.default_rng(31)
        entries = random_entries(rng, 800)
        return request.param(bucket=6).insert(entries), set(entries)

    def test_straddling_box_found_from_both_sides(self):
        tree = kdtree(bucket=2)
        wide = IndexEntry(STBox(0, 100, 0, 1, 0, 1), 1)
        tree.insert([wide] + [point_entry(i, 10 * i, 0.5, 0.5) for i in range(2, 8)])
        for qx in (1.0, 99.0):
            q = STBox(qx, qx, 0.5, 0.5, 0.5, 0.5)
            assert wide in set(tree.visit(q, strategy_for(BoxOperator.OVERLAPS)))

    @pytest.mark.parametrize("op", list(BoxOperator))
    def test_matches_linear_scan(self, populated, op):
        tree, entries = populated
        strategy = strategy_for(op)
        rng = np.random.default_rng(32)
        for _ in range(25):
            x, y, t = rng.uniform(0, 1000, size=3)
            w, h, d = rng.uniform(0, 200, size=3)
            q = STBox(x, x + w, y, y + h, t, t + d)
            assert set(tree.visit(q, strategy)) == {e for e in entries if strategy(e.box, q)}

    def test_nearest_order_equals_sorted_scan(self, populated):
        tree, entries = populated
        q = STBox(400, 420, 600, 610, 100, 900)
        got = list(tree.visit_nearest(q))
        expected = sorted(
            ((e, tree.distance(e.box, q)) for e in entries),
            key=lambda p: (p[1], p[0].tuple_id, p[0].box.as_tuple()),
        )
        assert got == expected

    @pytest.mark.parametrize("make", TREES)
    def test_empty_tree(self, make):
        tree = make()
        q = STBox(0, 1, 0, 1, 0, 1)
        assert list(tree.visit(q, strategy_for("overlaps"))) == []
        assert list(tree.visit_nearest(q)) == []
