"""Local HTTP API over a pipeline run directory.

Read-mostly: patterns, verdicts, metrics, and witness snippets come from the
run artifacts; labels are the one writable resource, appended to the run's
label log under a lock so concurrent submissions serialize.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .jsonio import (
    method_cfg_from_json,
    pattern_from_json,
    read_jsonl,
    verdict_from_json,
)
from .mining import PatternStats, decode_canonical
from .triage import (
    FilterVerdict,
    LabelError,
    LabelRecord,
    LabelStore,
    compute_metrics,
    should_continue,
    unlabeled_investigated,
)


class LabelSubmission(BaseModel):
    pattern_id: str
    sugarable: bool
    sugar_name: str | None = None
    notes: str = ""
    labeler: str = ""


class RunState:
    """Artifacts of one pipeline run plus the live label store."""

    def __init__(self, run_dir: Path, corpus_root: Path):
        self.run_dir = run_dir
        self.corpus_root = corpus_root
        self.patterns: list[PatternStats] = [
            pattern_from_json(d) for d in read_jsonl(run_dir / "patterns.jsonl")
        ]
        self.verdicts: list[FilterVerdict] = [
            verdict_from_json(d) for d in read_jsonl(run_dir / "verdicts.jsonl")
        ]
        self.by_id = {p.id: p for p in self.patterns}
        self.verdict_by_id = {v.pattern_id: v for v in self.verdicts}
        self.labels = LabelStore(run_dir / "labels.jsonl", set(self.by_id))
        self.write_lock = threading.Lock()
        self.max_size = max((p.size for p in self.patterns), default=1)
        run_json = run_dir / "run.json"
        if run_json.exists():
            meta = json.loads(run_json.read_text(encoding="utf-8"))
            self.max_size = meta.get("max_size", self.max_size)
        # span lookup for witness snippets: (file, method_index, node_id) -> span
        self.spans: dict[tuple[str, int, int], tuple[int, int]] = {}
        cfgs_path = run_dir / "cfgs.jsonl"
        if cfgs_path.exists():
            for d in read_jsonl(cfgs_path):
                cfg = method_cfg_from_json(d)
                key = (cfg.method.file_path, cfg.method.method_index)
                for node in cfg.nodes:
                    self.spans[key + (node.id,)] = node.span

    def snippet(self, file_path: str, span: tuple[int, int]) -> str:
        data = (self.corpus_root / file_path).read_bytes()
        return data[span[0]:span[1]].decode("utf-8", errors="replace")


def _pattern_payload(state: RunState, p: PatternStats) -> dict:
    verdict = state.verdict_by_id.get(p.id)
    latest = state.labels.latest().get(p.id)
    return {
        "pattern": p.to_json(),
        "nodes": list(decode_canonical(p.canonical.text).nodes),
        "edges": [list(e) for e in decode_canonical(p.canonical.text).edges],
        "verdict": verdict.to_json() if verdict else None,
        "label": latest.to_json() if latest else None,
        "history_length": len(state.labels.history_for(p.id)),
    }


def create_app(run_dir: Path, corpus_root: Path, ui_dir: Path | None = None) -> FastAPI:
    state = RunState(run_dir, corpus_root)
    app = FastAPI(title="sugarminer triage API")

    _RULE_FLAGS = ("duplication", "data_edge", "null_rule", "error_handling",
                   "entry_exit")

    @app.get("/api/patterns")
    def list_patterns(size: int | None = Query(default=None),
                      investigated: bool | None = Query(default=None),
                      rule: str | None = Query(default=None)):
        if rule is not None and rule not in _RULE_FLAGS:
            raise HTTPException(status_code=422, detail=f"unknown rule {rule!r}")
        out = []
        for p in state.patterns:  # miner order: size, support desc, canonical
            if size is not None and p.size != size:
                continue
            v = state.verdict_by_id.get(p.id)
            if investigated is not None:
                if v is None or v.investigated != investigated:
                    continue
            if rule is not None:
                if v is None or not getattr(v, rule):
                    continue
            out.append(_pattern_payload(state, p))
        return out

    @app.get("/api/patterns/{pattern_id}")
    def get_pattern(pattern_id: str):
        p = state.by_id.get(pattern_id)
        if p is None:
            raise HTTPException(status_code=404, detail="unknown pattern")
        return _pattern_payload(state, p)

    @app.get("/api/patterns/{pattern_id}/examples")
    def get_examples(pattern_id: str):
        p = state.by_id.get(pattern_id)
        if p is None:
            raise HTTPException(status_code=404, detail="unknown pattern")
        out = []
        for w in p.witnesses:
            key = (w.method.file_path, w.method.method_index)
            nodes = []
            for pattern_index, node_id in w.mapping:
                span = state.spans.get(key + (node_id,))
                nodes.append(
                    {
                        "pattern_index": pattern_index,
                        "node_id": node_id,
                        "span": list(span) if span else None,
                        "snippet": state.snippet(w.method.file_path, span) if span else None,
                    }
                )
            out.append({"method": w.method.to_json(), "nodes": nodes})
        return out

    @app.post("/api/labels", status_code=201)
    def post_label(submission: LabelSubmission):
        if submission.pattern_id not in state.by_id:
            raise HTTPException(status_code=404, detail="unknown pattern")
        rec = LabelRecord(
            pattern_id=submission.pattern_id,
            sugarable=submission.sugarable,
            sugar_name=submission.sugar_name or None,
            notes=submission.notes,
            labeler=submission.labeler,
        )
        try:
            with state.write_lock:
                stored = state.labels.record_label(rec)
        except LabelError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return stored.to_json()

    @app.get("/api/metrics")
    def get_metrics():
        rows = compute_metrics(state.patterns, state.verdicts, state.labels.latest())
        return [r.to_json() for r in rows]

    @app.get("/api/continue")
    def get_continue(size: int = Query(...)):
        labels = state.labels.latest()
        missing = unlabeled_investigated(state.patterns, state.verdicts, labels, size)
        if missing:
            return JSONResponse(status_code=409, content={"unlabeled": missing})
        rows = compute_metrics(state.patterns, state.verdicts, labels)
        advance = should_continue(rows, size, state.max_size)
        new_sugars = next((r.new_sugars for r in rows if r.size == size), 0)
        return {"size": size, "new_sugars": new_sugars, "continue": advance}

    if ui_dir is not None and ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
