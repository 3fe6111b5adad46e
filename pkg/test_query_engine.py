"""Tests for deduplicating range search and exact KNN over multi-entry indexes."""

import logging

import numpy as np
import pytest

from conftest import make_traj
from trajgist.bench.ingestion import TrajectoryStore
from trajgist.bench.runner import build
from trajgist.core.errors import IntegrityError, InvalidParameterError
from trajgist.core.geometry import Period, Region, STBox
from trajgist.index import BoxOperator, IndexKind, IndexSettings, OperatorClass
from trajgist.query import (
    KnnQuery,
    RangeQuery,
    brute_force_knn,
    brute_force_search,
    candidate_stats,
    knn,
    search,
)
from trajgist.split import SplitAlgorithm, SplitConfig

SMALL = IndexSettings(node_capacity=8, fill_factor=0.4, bucket_size=4)

SPLITS = [
    SplitConfig(algorithm=SplitAlgorithm.NONE),
    SplitConfig(algorithm=SplitAlgorithm.SEG, m=1),
    SplitConfig(algorithm=SplitAlgorithm.SEG, m=5),
    SplitConfig(algorithm=SplitAlgorithm.MERGE, k=4),
    SplitConfig(algorithm=SplitAlgorithm.ADAPT, m=3),
    SplitConfig(algorithm=SplitAlgorithm.LINEAR, qx=20, qy=20, qt=20),
    SplitConfig(algorithm=SplitAlgorithm.EQUI, k=3),
]


def index_over(store, kind=IndexKind.RTREE, split=SplitConfig(algorithm=SplitAlgorithm.SEG, m=1)):
    return build(store, kind, split, SMALL).index


def store_of(*trajs):
    return TrajectoryStore.from_trajectories(trajs)


def random_range_queries(rng, count):
    """Region, point and all-match box queries over the walk store's extent."""
    out = []
    for i in range(count):
        cx, cy = rng.uniform(-150, 150, size=2)
        half = rng.uniform(5, 80)
        region = Region(cx - half, cx + half, cy - half, cy + half)
        t0 = float(rng.uniform(0, 400))
        period = Period(t0, t0 + float(rng.uniform(10, 200)))
        pick = i % 6
        if pick == 0:
            out.append(RangeQuery.region(region))
        elif pick == 1:
            out.append(RangeQuery.region(region, period))
        elif pick == 2:
            out.append(RangeQuery.point(cx, cy, half / 4))
        else:
            op = (BoxOperator.CONTAINED_BY, BoxOperator.LEFT, BoxOperator.DISJOINT)[pick - 3]
            big = STBox(cx - 4 * half, cx + 4 * half, cy - 4 * half, cy + 4 * half,
                        period.tstart, period.tend + 300)
            out.append(RangeQuery.box_operator(big, op))
    return out


# =============================================================================
# Query types
# =============================================================================


class TestQueryTypes:
    def test_operator_classes(self):
        box = STBox(0, 1, 0, 1, 0, 1)
        assert RangeQuery(box).operator_class is OperatorClass.EXISTS_MATCH
        for op in (BoxOperator.LEFT, BoxOperator.CONTAINED_BY, BoxOperator.DISJOINT):
            assert RangeQuery(box, op).operator_class is OperatorClass.ALL_MATCH

    def test_box_operator_attaches_recheck_for_all_match(self):
        box = STBox(0, 1, 0, 1, 0, 1)
        assert RangeQuery.box_operator(box, "overlaps").refine is None
        assert RangeQuery.box_operator(box, "left").refine is not None

    def test_knn_requires_positive_k(self):
        with pytest.raises(InvalidParameterError):
            KnnQuery(0.0, 0.0, k=0)

    def test_knn_box_is_degenerate_point(self):
        q = KnnQuery(3.0, 4.0, 2, Period(10, 20))
        assert q.box == STBox(3, 3, 4, 4, 10, 20)
        assert not KnnQuery(3.0, 4.0).box.is_time_bounded


# =============================================================================
# Range search
# =============================================================================


class TestSearch:
    def test_split_tuple_returned_once(self):
        traj = make_traj(1, [(0, 0, 0), (1, 0, 1), (2, 0, 2), (3, 0, 3)])
        store = store_of(traj)
        index = index_over(store)
        assert index.entry_count == 3
        res = search(index, RangeQuery(STBox(-1, 4, -1, 1, -1, 4)), store)
        assert res.tuple_ids == [1]
        assert res.stats.as_tuple() == (3, 1, 1)

    def test_contained_by_candidate_removed_by_recheck(self):
        traj = make_traj(1, [(0, 0, 0), (10, 0, 10), (20, 0, 20)])
        store = store_of(traj)
        index = index_over(store)
        q = RangeQuery(STBox(-1, 12, -1, 1, 0, 20), BoxOperator.CONTAINED_BY)
        res = search(index, q, store)
        assert res.tuple_ids == []
        assert res.stats.candidates == 1

    def test_contains_rejected(self):
        store = store_of(make_traj(1, [(0, 0, 0), (1, 1, 1)]))
        with pytest.raises(InvalidParameterError):
            search(index_over(store), RangeQuery(STBox(0, 1, 0, 1, 0, 1), BoxOperator.CONTAINS), store)

    def test_unknown_tuple_is_integrity_error(self):
        store = store_of(make_traj(1, [(0, 0, 0), (1, 1, 1)]))
        index = index_over(store)
        with pytest.raises(IntegrityError):
            search(index, RangeQuery(STBox(0, 1, 0, 1, 0, 1)), {})

    def test_box_only_query_is_index_answer(self):
        a = make_traj(1, [(0, 0, 0), (10, 10, 10)])
        b = make_traj(2, [(50, 50, 0), (60, 60, 10)])
        store = store_of(a, b)
        q = RangeQuery(STBox(9, 9.5, 0, 1, 0, 10))
        res = search(index_over(store, split=SplitConfig(algorithm=SplitAlgorithm.NONE)), q, store)
        # the box touches a's bbox but not its path
        assert res.tuple_ids == [1]
        assert res.stats.candidates == res.stats.results

    def test_region_period_refine(self):
        a = make_traj(1, [(0, 0, 0), (10, 0, 10)])
        store = store_of(a)
        index = index_over(store)
        region = Region(4, 6, -1, 1)
        assert search(index, RangeQuery.region(region, Period(4, 6)), store).tuple_ids == [1]
        assert search(index, RangeQuery.region(region, Period(8, 10)), store).tuple_ids == []

    def test_point_at_outside_lifetime_is_false(self):
        store = store_of(make_traj(1, [(0, 0, 0), (10, 0, 10)]))
        index = index_over(store)
        assert search(index, RangeQuery.point_at(5, 0, 5, 0.1), store).tuple_ids == [1]
        assert search(index, RangeQuery.point_at(5, 0, 50, 0.1), store).tuple_ids == []

    def test_results_sorted_and_unique(self, walk_store):
        index = index_over(walk_store)
        res = search(index, RangeQuery(STBox(-1e4, 1e4, -1e4, 1e4, -1e4, 1e4)), walk_store)
        assert res.tuple_ids == sorted(set(res.tuple_ids))
        assert res.tuple_ids == sorted(walk_store)

    def test_brute_force_needs_exact_predicate(self, walk_store):
        with pytest.raises(InvalidParameterError):
            brute_force_search(RangeQuery(STBox(0, 1, 0, 1, 0, 1)), walk_store)

    @pytest.mark.parametrize("kind", list(IndexKind))
    @pytest.mark.parametrize("split", SPLITS, ids=lambda s: s.label)
    def test_matches_brute_force(self, walk_store, kind, split):
        index = build(walk_store, kind, split, SMALL).index
        rng = np.random.default_rng(77)
        for q in random_range_queries(rng, 60):
            res = search(index, q, walk_store)
            assert res.tuple_ids == brute_force_search(q, walk_store)
            assert res.stats.results <= res.stats.candidates <= res.stats.matched_entries


class TestCandidateStats:
    def test_disjoint_query_counts_nothing(self, walk_store):
        index = index_over(walk_store)
        far = RangeQuery(STBox(1e6, 1e6 + 1, 1e6, 1e6 + 1, 0, 1))
        assert candidate_stats(index, far, walk_store).as_tuple() == (0, 0, 0)

    def test_exists_match_without_refine(self, walk_store):
        index = index_over(walk_store)
        stats = candidate_stats(index, RangeQuery(STBox(-20, 20, -20, 20, 0, 300)), walk_store)
        assert stats.candidates == stats.results


# =============================================================================
# KNN
# =============================================================================


class TestKnn:
    def test_single_trajectory(self):
        store = store_of(make_traj(4, [(5, 5, 0), (6, 5, 1)]))
        res = knn(index_over(store), KnnQuery(0, 0, 1), store)
        assert res.tuple_ids == [4]
        assert not res.short

    @pytest.mark.parametrize("kind", list(IndexKind))
    def test_exact_order_not_box_order(self, kind):
        # L-shaped path whose bbox reaches near the origin while the path stays far
        l_shape = make_traj(1, [(1, 10, 0), (10, 10, 1), (10, 1, 2)])
        short_line = make_traj(2, [(3, 3, 0), (4, 3, 1)])
        store = store_of(l_shape, short_line)
        index = index_over(store, kind, SplitConfig(algorithm=SplitAlgorithm.NONE))
        res = knn(index, KnnQuery(0, 0, 2), store)
        assert res.tuple_ids == [2, 1]
        assert res.distances == brute_force_knn(KnnQuery(0, 0, 2), store)[1]
        assert res.distances[0] == pytest.approx(np.hypot(3, 3))

    def test_ties_broken_by_tuple_id(self):
        store = store_of(
            make_traj(9, [(5, 0, 0), (5, 1, 1)]),
            make_traj(3, [(-5, 0, 0), (-5, 1, 1)]),
            make_traj(6, [(0, 5, 0), (1, 5, 1)]),
        )
        res = knn(index_over(store), KnnQuery(0, 0, 3), store)
        assert res.tuple_ids == [3, 6, 9]
        assert res.distances == [5.0, 5.0, 5.0]

    def test_short_result_flagged(self, caplog):
        store = store_of(make_traj(1, [(0, 0, 0), (1, 0, 1)]), make_traj(2, [(5, 0, 0), (6, 0, 1)]))
        with caplog.at_level(logging.WARNING, logger="trajgist.query.engine"):
            res = knn(index_over(store), KnnQuery(0, 0, 5), store)
        assert res.tuple_ids == [1, 2]
        assert res.short
        assert "2 of 5" in caplog.text

    def test_period_skips_undefined_trajectories(self):
        early = make_traj(1, [(100, 0, 0), (101, 0, 10)])
        late = make_traj(2, [(0, 0, 100), (1, 0, 110)])
        store = store_of(early, late)
        res = knn(index_over(store), KnnQuery(0, 0, 2, Period(0, 20)), store)
        assert res.tuple_ids == [1]
        assert res.short

    @pytest.mark.parametrize("kind", list(IndexKind))
    @pytest.mark.parametrize("split", SPLITS, ids=lambda s: s.label)
    def test_matches_brute_force(self, walk_store, kind, split):
        index = build(walk_store, kind, split, SMALL).index
        rng = np.random.default_rng(88)
        for i in range(10):
            x, y = rng.uniform(-100, 100, size=2)
            t0 = float(rng.uniform(0, 300))
            q = KnnQuery(x, y, 5, Period(t0, t0 + 100) if i % 2 else None)
            res = knn(index, q, walk_store)
            ids, dists = brute_force_knn(q, walk_store)
            assert res.tuple_ids == ids
            assert res.distances == dists
            assert res.distances == sorted(res.distances)


# =============================================================================
# Split invariance
# =============================================================================


class TestSplitInvariance:
    def test_identical_results_across_splits(self, walk_store):
        rng = np.random.default_rng(5)
        queries = random_range_queries(rng, 30)
        knn_queries = [KnnQuery(*rng.uniform(-80, 80, size=2), 4) for _ in range(5)]
        baseline = None
        for kind in IndexKind:
            for split in SPLITS:
                index = build(walk_store, kind, split, SMALL).index
                answer = (
                    [search(index, q, walk_store).tuple_ids for q in queries],
                    [knn(index, q, walk_store).tuple_ids for q in knn_queries],
                )
                if baseline is None:
                    baseline = answer
                assert answer == baseline
