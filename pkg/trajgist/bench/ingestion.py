"""
TrajGiST — Trajectory CSV Ingestion
====================================
Loads an ``id,t,x,y`` CSV into a tuple store, validating every row and
cleaning the usual AIS-style defects: rows out of time order are sorted,
repeated (id, t) rows collapse to their first occurrence.
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

import numpy as np
import pandas as pd

from ..core.errors import CsvParseError
from ..core.geometry import STBox, stbox_union_all
from ..core.trajectory import TrajectorySequence, bbox
from .generator import CSV_COLUMNS

logger = logging.getLogger(__name__)

_PANDAS_LINE = re.compile(r"line (\d+)")


@dataclass
class CleaningStats:
    rows: int = 0
    duplicates_dropped: int = 0
    out_of_order: int = 0
    trajectories: int = 0


class TrajectoryStore(dict):
    """Tuple id → trajectory, plus the cleaning counters from ingestion."""

    def __init__(self, *args, cleaning: Optional[CleaningStats] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self.cleaning = cleaning or CleaningStats(trajectories=len(self))

    @classmethod
    def from_trajectories(cls, trajs: Iterable[TrajectorySequence]) -> "TrajectoryStore":
        return cls({t.tuple_id: t for t in trajs})

    def extent(self) -> STBox:
        return stbox_union_all(bbox(t) for t in self.values())

    @property
    def mean_segments(self) -> float:
        return float(np.mean([t.num_segments for t in self.values()])) if self else 0.0


# ── Parsing ───────────────────────────────────────────────
def _undecodable_line(path: Path) -> int:
    """1-based line of the first byte sequence that is not UTF-8."""
    data = path.read_bytes()
    try:
        data.decode("utf-8")
    except UnicodeDecodeError as exc:
        return data.count(b"\n", 0, exc.start) + 1
    return 1


def _read_frame(path: Path) -> pd.DataFrame:
    try:
        raw = pd.read_csv(
            path,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            encoding="utf-8",
        )
    except pd.errors.ParserError as exc:
        match = _PANDAS_LINE.search(str(exc))
        line = int(match.group(1)) if match else None
        raise CsvParseError("wrong number of fields", line) from exc
    except pd.errors.EmptyDataError as exc:
        raise CsvParseError("empty file", 1) from exc
    except UnicodeDecodeError as exc:
        raise CsvParseError("file is not valid UTF-8", _undecodable_line(path)) from exc

    if list(raw.columns) != CSV_COLUMNS:
        raise CsvParseError(f"header must be {','.join(CSV_COLUMNS)}, got {','.join(raw.columns)}", 1)
    return raw


_ID_MIN, _ID_MAX = int(np.iinfo(np.int64).min), int(np.iinfo(np.int64).max)


def _parse_id(text: str) -> Optional[int]:
    # exact integers; a float round trip merges ids above 2**53
    try:
        value = int(text)
    except (TypeError, ValueError):
        return None
    return value if _ID_MIN <= value <= _ID_MAX else None


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except (TypeError, ValueError):
        return np.nan


def _to_numeric(raw: pd.DataFrame) -> pd.DataFrame:
    """Convert every column; the first bad row raises with its file line."""
    ids = raw["id"].map(_parse_id)
    coords = pd.DataFrame({col: raw[col].map(_parse_float).astype(float) for col in CSV_COLUMNS[1:]})
    bad = ids.isna().to_numpy() | ~np.isfinite(coords.to_numpy(dtype=float)).all(axis=1)
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        text = ",".join(str(v) for v in raw.iloc[row].tolist())
        raise CsvParseError(f"malformed row {text!r}", row + 2)
    coords.insert(0, "id", ids.astype(np.int64))
    return coords


# ── Cleaning ──────────────────────────────────────────────
def _clean(df: pd.DataFrame, stats: CleaningStats) -> pd.DataFrame:
    prev_t = df.groupby("id", sort=False)["t"].shift()
    stats.out_of_order = int((df["t"] < prev_t).sum())

    # first occurrence in file order wins
    dup = df.duplicated(subset=["id", "t"], keep="first")
    stats.duplicates_dropped = int(dup.sum())
    df = df[~dup].sort_values(["id", "t"])

    if stats.out_of_order:
        logger.warning("Reordered %d out-of-order rows", stats.out_of_order)
    if stats.duplicates_dropped:
        logger.warning("Dropped %d rows with a repeated (id, t)", stats.duplicates_dropped)
    return df


def load_csv(path: Union[str, Path]) -> TrajectoryStore:
    """Parse, clean and group a trajectory CSV into a tuple store."""
    path = Path(path)
    raw = _read_frame(path)
    df = _to_numeric(raw)
    stats = CleaningStats(rows=len(df))
    df = _clean(df, stats)

    store = TrajectoryStore(cleaning=stats)
    for tuple_id, group in df.groupby("id", sort=True):
        store[int(tuple_id)] = TrajectorySequence.from_arrays(
            int(tuple_id), group["x"].to_numpy(), group["y"].to_numpy(), group["t"].to_numpy(),
        )
    stats.trajectories = len(store)
    logger.info(
        "Loaded %d trajectories from %s (%d rows, %d duplicates, %d reordered)",
        stats.trajectories, path, stats.rows, stats.duplicates_dropped, stats.out_of_order,
    )
    return store
