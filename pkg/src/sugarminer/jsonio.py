"""Artifact file schemas: JSONL codecs for graphs, patterns, and reports.

Every JSON record carries schema_version; CSV reports carry it as a leading
comment line.  Writers emit sorted-key compact JSON so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from .calibration import CalibrationResult
from .catalog import CensusRow
from .cfg import CfgEdge, CfgNode, EdgePolarity, MethodCfg, MethodRef
from .generalize import GeneralizedCfg, GeneralizedEdge, GeneralizedNode
from .mining import CanonicalForm, PatternStats, Witness
from .triage import FilterVerdict
from .vocab import LiteralTag, NodeKind, OpTag, TypeTag

SCHEMA_VERSION = 1


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_jsonl(path: Path, records: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            rec = {"schema_version": SCHEMA_VERSION, **rec}
            fh.write(dumps(rec) + "\n")
            count += 1
    return count


def read_jsonl(path: Path) -> Iterator[dict]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield json.loads(line)


# -- MethodCfg --------------------------------------------------------------

def method_cfg_to_json(cfg: MethodCfg) -> dict:
    nodes = []
    for n in cfg.nodes:
        rec: dict = {
            "id": n.id,
            "kind": n.kind.value,
            "declared_type": n.declared_type.value if n.declared_type else None,
            "literal_kinds": [t.value for t in n.literal_kinds],
            "operator_tags": [t.value for t in n.operator_tags],
            "defs": sorted(n.defs),
            "uses": sorted(n.uses),
            "span": list(n.span),
        }
        if n.call_arg_count is not None:
            rec["call_arg_count"] = n.call_arg_count
        if n.call_receiver is not None:
            rec["call_receiver"] = n.call_receiver
        if n.field_target:
            rec["field_target"] = True
        nodes.append(rec)
    return {
        "method": cfg.method.to_json(),
        "params": [[name, t] for name, t in cfg.params],
        "nodes": nodes,
        "edges": [
            {"src": e.src, "dst": e.dst, "polarity": e.polarity.value}
            for e in cfg.edges
        ],
        "entry_id": cfg.entry_id,
        "exit_id": cfg.exit_id,
    }


def method_cfg_from_json(d: dict) -> MethodCfg:
    nodes = []
    for rec in d["nodes"]:
        nodes.append(
            CfgNode(
                id=rec["id"],
                kind=NodeKind(rec["kind"]),
                declared_type=TypeTag(rec["declared_type"]) if rec.get("declared_type") else None,
                literal_kinds=[LiteralTag(t) for t in rec["literal_kinds"]],
                operator_tags=[OpTag(t) for t in rec["operator_tags"]],
                defs=set(rec["defs"]),
                uses=set(rec["uses"]),
                span=tuple(rec["span"]),
                call_arg_count=rec.get("call_arg_count"),
                call_receiver=rec.get("call_receiver"),
                field_target=rec.get("field_target", False),
            )
        )
    return MethodCfg(
        method=MethodRef.from_json(d["method"]),
        nodes=nodes,
        edges=[
            CfgEdge(e["src"], e["dst"], EdgePolarity(e["polarity"]))
            for e in d["edges"]
        ],
        entry_id=d["entry_id"],
        exit_id=d["exit_id"],
        params=[(name, t) for name, t in d.get("params", [])],
    )


# -- GeneralizedCfg -----------------------------------------------------------

def generalized_to_json(g: GeneralizedCfg) -> dict:
    return {
        "method": g.method.to_json(),
        "nodes": [{"id": n.id, "label": n.label} for n in g.nodes],
        "edges": [
            {
                "src": e.src,
                "dst": e.dst,
                "polarity": e.polarity.value,
                "modifiers": list(e.modifiers),
            }
            for e in g.edges
        ],
        "entry_id": g.entry_id,
        "exit_id": g.exit_id,
    }


def generalized_from_json(d: dict) -> GeneralizedCfg:
    return GeneralizedCfg(
        method=MethodRef.from_json(d["method"]),
        nodes=[GeneralizedNode(n["id"], n["label"]) for n in d["nodes"]],
        edges=[
            GeneralizedEdge(
                src=e["src"],
                dst=e["dst"],
                polarity=EdgePolarity(e["polarity"]),
                modifiers=tuple(e["modifiers"]),
            )
            for e in d["edges"]
        ],
        entry_id=d["entry_id"],
        exit_id=d["exit_id"],
    )


# -- patterns / verdicts ------------------------------------------------------

def pattern_from_json(d: dict) -> PatternStats:
    return PatternStats(
        canonical=CanonicalForm(d["canonical"]),
        size=d["size"],
        support_count=d["support_count"],
        support_ratio=d["support_ratio"],
        witnesses=[
            Witness(
                method=MethodRef.from_json(w["method"]),
                mapping=[tuple(m) for m in w["mapping"]],
            )
            for w in d["witnesses"]
        ],
    )


def verdict_from_json(d: dict) -> FilterVerdict:
    flags = d["flags"]
    return FilterVerdict(
        pattern_id=d["pattern_id"],
        size=d["size"],
        duplication=flags["duplication"],
        data_edge=flags["data_edge"],
        null_rule=flags["null_rule"],
        error_handling=flags["error_handling"],
        entry_exit=flags["entry_exit"],
    )


# -- reports --------------------------------------------------------------------

def calibration_json(result: CalibrationResult) -> str:
    return json.dumps(
        {"schema_version": SCHEMA_VERSION, **result.to_json()},
        sort_keys=True, indent=2,
    ) + "\n"


def census_csv(rows: list[CensusRow]) -> str:
    lines = [f"# schema_version: {SCHEMA_VERSION}", "idiom,cfg_count"]
    for r in rows:
        lines.append(f"{r.idiom.value},{r.cfg_count}")
    return "\n".join(lines) + "\n"


def census_examples_records(rows: list[CensusRow]) -> list[dict]:
    out = []
    for r in rows:
        for method, node_ids in r.example_refs:
            out.append(
                {
                    "idiom": r.idiom.value,
                    "method": method.to_json(),
                    "node_ids": node_ids,
                }
            )
    return out
