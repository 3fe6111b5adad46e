"""
TrajGiST — Benchmark Report Schema
===================================
Pydantic models for the JSON report. Field order is the key order on disk.
"""

import hashlib
import logging
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

# fields that vary between identical runs
TIMING_FIELDS = ("ms",)


class BuildReport(BaseModel):
    entries: int = 0
    nodes: int = 0
    height: int = 0
    ms: float = 0.0


class QueryReport(BaseModel):
    kind: str
    matched_entries: int = 0
    candidates: int = 0
    results: int = 0
    ms: float = 0.0
    digest: str = ""
    short: bool = False


class Report(BaseModel):
    config: Dict[str, Any] = Field(default_factory=dict)
    build: BuildReport = Field(default_factory=BuildReport)
    queries: List[QueryReport] = Field(default_factory=list)
    aggregate: Dict[str, Any] = Field(default_factory=dict)

    def without_timings(self) -> Dict[str, Any]:
        """Report contents with every timing field removed."""
        def strip(value):
            if isinstance(value, dict):
                return {k: strip(v) for k, v in value.items() if k not in TIMING_FIELDS}
            if isinstance(value, list):
                return [strip(v) for v in value]
            return value
        return strip(self.model_dump(mode="json"))


def result_digest(tuple_ids: Sequence[int]) -> str:
    """SHA-256 over the ordered result ids."""
    text = ",".join(str(t) for t in tuple_ids)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def aggregate(queries: Sequence[QueryReport]) -> Dict[str, Any]:
    """Per-kind and overall sums; independent of query order."""
    per_kind: Dict[str, Dict[str, float]] = defaultdict(
        lambda: {"queries": 0, "matched_entries": 0, "candidates": 0, "results": 0, "ms": 0.0}
    )
    for q in queries:
        acc = per_kind[q.kind]
        acc["queries"] += 1
        acc["matched_entries"] += q.matched_entries
        acc["candidates"] += q.candidates
        acc["results"] += q.results
        acc["ms"] += q.ms

    total = {"queries": 0, "matched_entries": 0, "candidates": 0, "results": 0, "ms": 0.0}
    for acc in per_kind.values():
        for key in total:
            total[key] += acc[key]
    total["ms"] = round(total["ms"], 3)
    for acc in per_kind.values():
        acc["ms"] = round(acc["ms"], 3)
        acc["filter_ratio"] = acc["results"] / acc["candidates"] if acc["candidates"] else 1.0

    return {"total": total, "by_kind": {k: per_kind[k] for k in sorted(per_kind)}}


def report_emit(report: Report, path: Union[str, Path]) -> Path:
    """Write the report as indented JSON; the parent directory must exist."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(report.model_dump_json(indent=2))
        f.write("\n")
    logger.info("Report written to %s", path)
    return path


def report_load(path: Union[str, Path]) -> Report:
    return Report.model_validate_json(Path(path).read_text(encoding="utf-8"))
