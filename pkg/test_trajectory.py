"""Tests for the trajectory model and exact predicates."""

import numpy as np
import pytest

from conftest import make_traj, random_walk
from trajgist.core.errors import EmptyRestrictionError, InvalidParameterError, OutOfDomainError
from trajgist.core.geometry import Period, Region, STBox, stbox_min_distance
from trajgist.core.trajectory import (
    Instant,
    TrajectorySequence,
    at_time,
    bbox,
    eintersects_point,
    eintersects_region,
    nearest_approach_distance,
    position_at,
    run_bbox,
    segment_bbox,
)


# =============================================================================
# Model
# =============================================================================


class TestTrajectorySequence:
    def test_timestamps_must_increase(self):
        with pytest.raises(InvalidParameterError):
            make_traj(1, [(0, 0, 1), (1, 1, 1)])

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameterError):
            TrajectorySequence(1, ())

    def test_non_finite_instant_rejected(self):
        with pytest.raises(InvalidParameterError):
            Instant(float("nan"), 0, 0)

    def test_counts(self, merge_example):
        assert merge_example.num_instants == 4
        assert merge_example.num_segments == 3

    def test_list_is_frozen_to_tuple(self):
        traj = TrajectorySequence(3, [Instant(0, 0, 0), Instant(1, 1, 1)])
        assert isinstance(traj.instants, tuple)


# =============================================================================
# Interpolation and boxes
# =============================================================================


class TestPositionAt:
    def test_midpoint(self, line_traj):
        assert position_at(line_traj, 5) == (5, 0)

    def test_endpoint(self, line_traj):
        assert position_at(line_traj, 0) == (0, 0)
        assert position_at(line_traj, 10) == (10, 0)

    def test_diagonal(self):
        traj = make_traj(1, [(0, 0, 0), (10, 20, 10)])
        assert position_at(traj, 7) == pytest.approx((7, 14))

    def test_stored_instant_exact(self, merge_example):
        assert position_at(merge_example, 2) == (2, 0)

    def test_out_of_domain(self, line_traj):
        with pytest.raises(OutOfDomainError):
            position_at(line_traj, 10.5)


class TestBoxes:
    def test_bbox(self, merge_example):
        assert bbox(merge_example) == STBox(0, 2, 0, 5, 0, 3)

    def test_single_instant_bbox_is_degenerate(self):
        traj = make_traj(1, [(3, 4, 5)])
        assert bbox(traj) == STBox(3, 3, 4, 4, 5, 5)

    def test_segment_bbox(self, merge_example):
        assert segment_bbox(merge_example, 2) == STBox(2, 2, 0, 5, 2, 3)

    def test_segment_bbox_out_of_range(self, merge_example):
        with pytest.raises(OutOfDomainError):
            segment_bbox(merge_example, 3)

    def test_run_bbox_inclusive(self, merge_example):
        assert run_bbox(merge_example, 0, 2) == STBox(0, 2, 0, 0, 0, 2)


# =============================================================================
# Restriction and exact predicates
# =============================================================================


class TestAtTime:
    def test_interior_period_interpolates_bounds(self, line_traj):
        sub = at_time(line_traj, Period(2, 4))
        assert [(i.x, i.t) for i in sub.instants] == [(2, 2), (4, 4)]

    def test_covering_period_returns_same(self, line_traj):
        assert at_time(line_traj, Period(-5, 50)) is line_traj

    def test_disjoint_period(self, line_traj):
        assert at_time(line_traj, Period(11, 12)) is None

    def test_instant_period(self, merge_example):
        sub = at_time(merge_example, Period.instant(2.5))
        assert sub.num_instants == 1
        assert (sub.instants[0].x, sub.instants[0].y) == (2, 2.5)

    def test_keeps_inner_instants(self, merge_example):
        sub = at_time(merge_example, Period(0.5, 2.5))
        assert [i.t for i in sub.instants] == [0.5, 1, 2, 2.5]


class TestExactPredicates:
    def test_region_crossed_by_segment_interior(self):
        traj = make_traj(1, [(0, 0, 0), (10, 10, 1)])
        assert eintersects_region(traj, Region(4, 6, 4, 6))

    def test_region_inside_bbox_but_missed(self):
        traj = make_traj(1, [(0, 0, 0), (10, 0, 1), (10, 10, 2)])
        assert not eintersects_region(traj, Region(1, 2, 5, 6))

    def test_region_touching_corner(self):
        traj = make_traj(1, [(0, 0, 0), (2, 2, 1)])
        assert eintersects_region(traj, Region(2, 3, 2, 3))

    def test_single_instant_region(self):
        traj = make_traj(1, [(1, 1, 0)])
        assert eintersects_region(traj, Region(0, 1, 0, 1))
        assert not eintersects_region(traj, Region(2, 3, 0, 1))

    def test_nearest_approach_projects_onto_segment(self, line_traj):
        assert nearest_approach_distance(line_traj, (5, 3)) == pytest.approx(3)

    def test_nearest_approach_to_endpoint(self, line_traj):
        assert nearest_approach_distance(line_traj, (13, 4)) == pytest.approx(5)

    def test_nearest_approach_with_period(self, line_traj):
        assert nearest_approach_distance(line_traj, (10, 0), Period(0, 4)) == pytest.approx(6)

    def test_nearest_approach_empty_restriction(self, line_traj):
        with pytest.raises(EmptyRestrictionError):
            nearest_approach_distance(line_traj, (0, 0), Period(20, 30))

    def test_eintersects_point_boundary_inclusive(self, line_traj):
        assert eintersects_point(line_traj, (5, 1), eps=1.0)
        assert not eintersects_point(line_traj, (5, 1.01), eps=1.0)

    def test_eintersects_point_negative_eps(self, line_traj):
        with pytest.raises(InvalidParameterError):
            eintersects_point(line_traj, (5, 1), eps=-1)


# =============================================================================
# Seeded properties over random walks
# =============================================================================


def sampled_path(traj, per_segment=200):
    """Points every 1/per_segment of each segment, endpoints included."""
    xs, ys = traj.xs, traj.ys
    u = np.linspace(0.0, 1.0, per_segment + 1)
    px = xs[:-1, None] + u * (xs[1:] - xs[:-1])[:, None]
    py = ys[:-1, None] + u * (ys[1:] - ys[:-1])[:, None]
    return px.ravel(), py.ravel()


class TestProperties:
    @pytest.fixture
    def walks(self, rng):
        return [random_walk(i, 30, rng) for i in range(8)]

    def test_position_at_stays_in_bbox(self, walks, rng):
        for traj in walks:
            box = bbox(traj)
            times = np.concatenate([[traj.start, traj.end], rng.uniform(traj.start, traj.end, 50)])
            for t in times:
                x, y = position_at(traj, float(t))
                assert box.xmin <= x <= box.xmax
                assert box.ymin <= y <= box.ymax

    def test_at_time_is_idempotent(self, walks, rng):
        for traj in walks:
            for _ in range(20):
                a, b = sorted(rng.uniform(traj.start - 5.0, traj.end + 5.0, 2))
                period = Period(float(a), float(b))
                once = at_time(traj, period)
                if once is None:
                    continue
                assert at_time(once, period) == once

    def test_nearest_approach_bounded_below_by_box_distance(self, walks, rng):
        for traj in walks:
            box = bbox(traj)
            for qx, qy in rng.uniform(-300.0, 300.0, size=(30, 2)):
                lower = stbox_min_distance(box, STBox.around_point(float(qx), float(qy)))
                assert nearest_approach_distance(traj, (float(qx), float(qy))) >= lower - 1e-9

    def test_eintersects_point_zero_eps_means_zero_distance(self, walks, rng):
        for traj in walks:
            for inst in traj.instants[:-1]:
                assert eintersects_point(traj, (inst.x, inst.y), 0.0)
            midpoints = [position_at(traj, float(t)) for t in rng.uniform(traj.start, traj.end, 10)]
            others = [tuple(map(float, q)) for q in rng.uniform(-300.0, 300.0, size=(10, 2))]
            for q in midpoints + others:
                assert eintersects_point(traj, q, 0.0) == (nearest_approach_distance(traj, q) == 0.0)

    def test_eintersects_region_agrees_with_sampling(self, walks, rng):
        for traj in walks:
            px, py = sampled_path(traj)
            seg_len = np.hypot(np.diff(traj.xs), np.diff(traj.ys))
            slack = float(seg_len.max()) / 200 + 1e-9
            box = bbox(traj)
            for _ in range(40):
                cx = rng.uniform(box.xmin, box.xmax)
                cy = rng.uniform(box.ymin, box.ymax)
                hx, hy = rng.uniform(0.5, 15.0, 2)
                region = Region(float(cx - hx), float(cx + hx), float(cy - hy), float(cy + hy))

                def sampled_hit(pad):
                    return bool(np.any(
                        (px >= region.xmin - pad) & (px <= region.xmax + pad)
                        & (py >= region.ymin - pad) & (py <= region.ymax + pad)
                    ))

                exact = eintersects_region(traj, region)
                if sampled_hit(0.0):
                    assert exact
                if exact:
                    assert sampled_hit(slack)
