"""
TrajGiST — Synthetic Trajectory Generator
==========================================
Deterministic desk-scale datasets:

  random_waypoint — vehicles drive toward random waypoints at a jittered
                    speed, picking a new waypoint on arrival
  loop            — vehicles circle a point near the centre of the area,
                    so each trajectory's bounding box is mostly empty space

The same DatasetSpec always yields byte-identical CSV output.
"""

import logging
import math
from enum import Enum
from pathlib import Path
from typing import List, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..core.trajectory import TrajectorySequence

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["id", "t", "x", "y"]


class MovementModel(str, Enum):
    RANDOM_WAYPOINT = "random_waypoint"
    LOOP = "loop"


class DatasetSpec(BaseModel):
    vehicles: int = Field(20, ge=1)
    trips_per_vehicle: int = Field(10, ge=1)
    instants_per_trip: int = Field(100, ge=1, description="mean instants per trip")
    instants_jitter: float = Field(0.25, ge=0, lt=1)
    extent: float = Field(10_000.0, gt=0, description="side of the square area")
    time_span: float = Field(86_400.0, gt=0, description="seconds")
    sample_interval: float = Field(10.0, gt=0, description="mean seconds between instants")
    speed: float = Field(15.0, gt=0, description="mean speed, units per second")
    loop_radius: float = Field(0.3, gt=0, le=0.5, description="fraction of extent")
    seed: int = 42
    model: MovementModel = MovementModel.RANDOM_WAYPOINT


# ── Movement models ───────────────────────────────────────
def _num_instants(spec: DatasetSpec, rng: np.random.Generator) -> int:
    j = spec.instants_jitter
    return max(1, int(round(spec.instants_per_trip * rng.uniform(1 - j, 1 + j))))


def _timestamps(spec: DatasetSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    steps = rng.uniform(0.5, 1.5, size=n - 1) * spec.sample_interval
    duration = float(steps.sum())
    start = rng.uniform(0.0, max(spec.time_span - duration, 0.0))
    return np.concatenate([[start], start + np.cumsum(steps)])


def _random_waypoint(spec: DatasetSpec, ts: np.ndarray, rng: np.random.Generator):
    n = len(ts)
    xs, ys = np.empty(n), np.empty(n)
    x, y = rng.uniform(0, spec.extent, size=2)
    wx, wy = rng.uniform(0, spec.extent, size=2)
    speed = spec.speed * rng.uniform(0.5, 1.5)
    xs[0], ys[0] = x, y
    for i in range(1, n):
        budget = speed * (ts[i] - ts[i - 1])
        dist = math.hypot(wx - x, wy - y)
        if dist <= budget:
            x, y = wx, wy
            wx, wy = rng.uniform(0, spec.extent, size=2)
        else:
            x += (wx - x) * budget / dist
            y += (wy - y) * budget / dist
        xs[i], ys[i] = x, y
    return xs, ys


def _loop(spec: DatasetSpec, ts: np.ndarray, rng: np.random.Generator):
    n = len(ts)
    radius = spec.loop_radius * spec.extent * rng.uniform(0.8, 1.0)
    cx, cy = spec.extent / 2 + rng.uniform(-0.1, 0.1, size=2) * radius
    phase = rng.uniform(0, 2 * math.pi)
    direction = rng.choice([-1.0, 1.0])
    frac = (ts - ts[0]) / (ts[-1] - ts[0]) if n > 1 else np.zeros(1)
    theta = phase + direction * 2 * math.pi * frac
    noise = rng.normal(0.0, radius * 0.005, size=(2, n))
    return cx + radius * np.cos(theta) + noise[0], cy + radius * np.sin(theta) + noise[1]


_MODELS = {
    MovementModel.RANDOM_WAYPOINT: _random_waypoint,
    MovementModel.LOOP: _loop,
}


def generate_trajectories(spec: DatasetSpec) -> List[TrajectorySequence]:
    """One trajectory per (vehicle, trip); tuple ids start at 1."""
    rng = np.random.default_rng(spec.seed)
    model = _MODELS[spec.model]
    trajs = []
    tuple_id = 0
    for _ in range(spec.vehicles):
        for _ in range(spec.trips_per_vehicle):
            tuple_id += 1
            n = _num_instants(spec, rng)
            ts = _timestamps(spec, n, rng)
            xs, ys = model(spec, ts, rng)
            trajs.append(TrajectorySequence.from_arrays(tuple_id, xs, ys, ts))
    logger.info(
        "Generated %d %s trajectories (seed=%d)", len(trajs), spec.model.value, spec.seed,
    )
    return trajs


def trajectories_frame(trajs: List[TrajectorySequence]) -> pd.DataFrame:
    """Long-format frame with the id,t,x,y CSV columns."""
    frames = [
        pd.DataFrame({"id": traj.tuple_id, "t": traj.ts, "x": traj.xs, "y": traj.ys})
        for traj in trajs
    ]
    if not frames:
        return pd.DataFrame(columns=CSV_COLUMNS)
    return pd.concat(frames, ignore_index=True)[CSV_COLUMNS]


def write_csv(trajs: List[TrajectorySequence], path: Union[str, Path]) -> Path:
    path = Path(path)
    trajectories_frame(trajs).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    logger.info("Wrote %d trajectories to %s", len(trajs), path)
    return path


def generate(spec: DatasetSpec, path: Union[str, Path]) -> Path:
    """Generate a dataset and write it as CSV."""
    return write_csv(generate_trajectories(spec), path)
