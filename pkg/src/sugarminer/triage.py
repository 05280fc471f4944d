"""Rule-based pattern filtering, human label persistence, and size metrics.

The five filter rules mark which frequent patterns are worth a human look;
every size-1 pattern is inspected regardless.  Labels live in an append-only
log where the latest record per pattern wins; metrics aggregate patterns,
verdicts, and the current labels per pattern size.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .mining import PatternStats, decode_canonical
from .vocab import NodeKind

_NULL_WORD = re.compile(r"(?:^|[^\w$])(?:NULL|null)(?:[^\w$]|$)")

# error-handling rule matches these kinds; lowercase forms cover baseline
# labels, which carry raw source text
_ERROR_KINDS = {"TRY", "CATCH", "THROW", "try", "catch", "throw"}


@dataclass
class FilterVerdict:
    pattern_id: str
    size: int
    duplication: bool
    data_edge: bool
    null_rule: bool
    error_handling: bool
    entry_exit: bool

    @property
    def investigated(self) -> bool:
        return self.size == 1 or any(
            (self.duplication, self.data_edge, self.null_rule,
             self.error_handling, self.entry_exit)
        )

    def to_json(self) -> dict:
        return {
            "pattern_id": self.pattern_id,
            "size": self.size,
            "flags": {
                "duplication": self.duplication,
                "data_edge": self.data_edge,
                "null_rule": self.null_rule,
                "error_handling": self.error_handling,
                "entry_exit": self.entry_exit,
            },
            "investigated": self.investigated,
        }


def _first_token(label: str) -> str:
    return label.split(" ", 1)[0] if label else ""


def apply_rules(stats: PatternStats) -> FilterVerdict:
    """Evaluate the five capture rules on one mined pattern."""
    graph = decode_canonical(stats.canonical.text)
    labels = list(graph.nodes)
    first_tokens = [_first_token(l) for l in labels]
    duplication = graph.size >= 2 and len(set(labels)) == 1
    data_edge = any(lbl.split("|", 1)[1] != "" for _, _, lbl in graph.edges)
    null_rule = any(_NULL_WORD.search(l) for l in labels)
    error_handling = any(t in _ERROR_KINDS for t in first_tokens)
    entry_exit = (
        NodeKind.ENTRY.value in first_tokens and NodeKind.EXIT.value in first_tokens
    )
    return FilterVerdict(
        pattern_id=stats.id,
        size=stats.size,
        duplication=duplication,
        data_edge=data_edge,
        null_rule=null_rule,
        error_handling=error_handling,
        entry_exit=entry_exit,
    )


# ---------------------------------------------------------------------------
# Labels
# ---------------------------------------------------------------------------

class LabelError(Exception):
    pass


@dataclass
class LabelRecord:
    pattern_id: str
    sugarable: bool
    sugar_name: str | None = None
    notes: str = ""
    labeler: str = ""
    timestamp: str = ""  # ISO-8601 UTC

    def validate(self) -> None:
        if self.sugar_name and not self.sugarable:
            raise LabelError("a sugar name requires sugarable=true")

    def to_json(self) -> dict:
        return {
            "pattern_id": self.pattern_id,
            "sugarable": self.sugarable,
            "sugar_name": self.sugar_name,
            "notes": self.notes,
            "labeler": self.labeler,
            "timestamp": self.timestamp,
        }

    @staticmethod
    def from_json(d: dict) -> "LabelRecord":
        return LabelRecord(
            pattern_id=d["pattern_id"],
            sugarable=bool(d["sugarable"]),
            sugar_name=d.get("sugar_name"),
            notes=d.get("notes", ""),
            labeler=d.get("labeler", ""),
            timestamp=d.get("timestamp", ""),
        )


class LabelStore:
    """Append-only label log bound to a known pattern-id set.

    The full history is retained; the latest record per pattern wins for
    metrics.  Each append is flushed and fsynced so replay after a crash
    reproduces the latest-wins state.
    """

    def __init__(self, path: Path, known_ids: set[str]):
        self.path = path
        self.known_ids = known_ids
        self.history: list[LabelRecord] = []
        if path.exists():
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self.history.append(LabelRecord.from_json(json.loads(line)))

    def record_label(self, rec: LabelRecord) -> LabelRecord:
        if rec.pattern_id not in self.known_ids:
            raise LabelError(f"unknown pattern id {rec.pattern_id!r}")
        rec.validate()
        if not rec.timestamp:
            rec.timestamp = datetime.now(timezone.utc).isoformat()
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps({"schema_version": 1, **rec.to_json()}, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self.history.append(rec)
        return rec

    def latest(self) -> dict[str, LabelRecord]:
        latest: dict[str, LabelRecord] = {}
        for rec in self.history:
            latest[rec.pattern_id] = rec
        return latest

    def history_for(self, pattern_id: str) -> list[LabelRecord]:
        return [r for r in self.history if r.pattern_id == pattern_id]


# ---------------------------------------------------------------------------
# Metrics and the stopping rule
# ---------------------------------------------------------------------------

@dataclass
class SizeMetrics:
    size: int
    total_frequent: int
    investigated: int
    median_frequency: float
    sugarable_count: int
    new_sugars: int
    unique_sugars: int

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "total_frequent": self.total_frequent,
            "investigated": self.investigated,
            "median_frequency": self.median_frequency,
            "sugarable_count": self.sugarable_count,
            "new_sugars": self.new_sugars,
            "unique_sugars": self.unique_sugars,
        }


def _median(values: list[int]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    if n == 0:
        return 0.0
    mid = n // 2
    if n % 2 == 1:
        return float(ordered[mid])
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def compute_metrics(patterns: list[PatternStats],
                    verdicts: list[FilterVerdict],
                    labels: dict[str, LabelRecord]) -> list[SizeMetrics]:
    """Per-size aggregation over patterns, verdicts, and latest labels."""
    verdict_by_id = {v.pattern_id: v for v in verdicts}
    sizes = sorted({p.size for p in patterns})
    names_below: set[str] = set()
    rows: list[SizeMetrics] = []
    for size in sizes:
        at_size = [p for p in patterns if p.size == size]
        investigated = sum(
            1 for p in at_size
            if p.id in verdict_by_id and verdict_by_id[p.id].investigated
        )
        sugarable = 0
        names_here: set[str] = set()
        for p in at_size:
            rec = labels.get(p.id)
            if rec is None:
                continue
            if rec.sugarable:
                sugarable += 1
                if rec.sugar_name:
                    names_here.add(rec.sugar_name)
        rows.append(
            SizeMetrics(
                size=size,
                total_frequent=len(at_size),
                investigated=investigated,
                median_frequency=_median([p.support_count for p in at_size]),
                sugarable_count=sugarable,
                new_sugars=len(names_here - names_below),
                unique_sugars=len(names_here),
            )
        )
        names_below |= names_here
    return rows


class LabelingIncomplete(Exception):
    def __init__(self, unlabeled_ids: list[str]):
        super().__init__(f"{len(unlabeled_ids)} investigated patterns unlabeled")
        self.unlabeled_ids = unlabeled_ids


def unlabeled_investigated(patterns: list[PatternStats],
                           verdicts: list[FilterVerdict],
                           labels: dict[str, LabelRecord],
                           size: int) -> list[str]:
    verdict_by_id = {v.pattern_id: v for v in verdicts}
    return sorted(
        p.id for p in patterns
        if p.size == size
        and p.id in verdict_by_id and verdict_by_id[p.id].investigated
        and p.id not in labels
    )


def should_continue(metrics: list[SizeMetrics], current_size: int,
                    max_size: int,
                    patterns: list[PatternStats] | None = None,
                    verdicts: list[FilterVerdict] | None = None,
                    labels: dict[str, LabelRecord] | None = None) -> bool:
    """Advance to the next size only while this size named new sugars.

    When patterns/verdicts/labels are supplied, incomplete labeling of the
    current size raises LabelingIncomplete listing the missing ids.
    """
    if patterns is not None and verdicts is not None and labels is not None:
        missing = unlabeled_investigated(patterns, verdicts, labels, current_size)
        if missing:
            raise LabelingIncomplete(missing)
    if current_size >= max_size:
        return False
    for row in metrics:
        if row.size == current_size:
            return row.new_sugars > 0
    return False


def metrics_csv(rows: list[SizeMetrics]) -> str:
    """Render the per-size table (column layout of the evaluation tables)."""
    def num(x: float) -> str:
        return str(int(x)) if float(x).is_integer() else str(x)

    lines = [
        "# schema_version: 1",
        "size,total,investigated,median_freq,sugarable,new_sugars,unique_sugars",
    ]
    for r in rows:
        lines.append(
            f"{r.size},{r.total_frequent},{r.investigated},{num(r.median_frequency)},"
            f"{r.sugarable_count},{r.new_sugars},{r.unique_sugars}"
        )
    return "\n".join(lines) + "\n"
