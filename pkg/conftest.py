"""Shared fixtures: hand-built trajectories, random walks and generated stores."""

import numpy as np
import pytest

from trajgist.bench.generator import DatasetSpec, MovementModel, generate_trajectories
from trajgist.bench.ingestion import TrajectoryStore
from trajgist.core.trajectory import Instant, TrajectorySequence


def make_traj(tuple_id, points):
    """Trajectory from (x, y, t) triples."""
    return TrajectorySequence(tuple_id, tuple(Instant(x, y, t) for x, y, t in points))


def random_walk(tuple_id, n, rng, step=10.0, t0=0.0):
    xs = np.cumsum(rng.normal(0.0, step, size=n))
    ys = np.cumsum(rng.normal(0.0, step, size=n))
    ts = t0 + np.cumsum(rng.uniform(1.0, 5.0, size=n))
    return TrajectorySequence.from_arrays(tuple_id, xs, ys, ts)


@pytest.fixture
def line_traj():
    return make_traj(1, [(0, 0, 0), (10, 0, 10)])


@pytest.fixture
def merge_example():
    return make_traj(1, [(0, 0, 0), (1, 0, 1), (2, 0, 2), (2, 5, 3)])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def walk_store():
    rng = np.random.default_rng(99)
    trajs = [random_walk(i, int(rng.integers(2, 60)), rng, t0=float(rng.uniform(0, 200)))
             for i in range(1, 81)]
    return TrajectoryStore.from_trajectories(trajs)


@pytest.fixture(scope="session")
def waypoint_store():
    spec = DatasetSpec(vehicles=10, trips_per_vehicle=6, instants_per_trip=40,
                       extent=2000.0, time_span=20_000.0, seed=5)
    return TrajectoryStore.from_trajectories(generate_trajectories(spec))


@pytest.fixture(scope="session")
def loop_store():
    spec = DatasetSpec(vehicles=10, trips_per_vehicle=5, instants_per_trip=100,
                       model=MovementModel.LOOP, seed=11)
    return TrajectoryStore.from_trajectories(generate_trajectories(spec))
