"""Detectors for the seven proposed sugar idioms and the per-idiom census.

Each detector returns the node-id sets of the instances it finds; the census
counts a method once per idiom no matter how many instances it contains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .cfg import EdgePolarity, MethodCfg, MethodRef
from .vocab import LiteralTag, NodeKind, OpTag


class CatalogIdiom(str, Enum):
    MULTIPLE_ASSIGNMENT = "MULTIPLE_ASSIGNMENT"
    MULTIPLE_INCREMENT = "MULTIPLE_INCREMENT"
    UNLESS = "UNLESS"
    ANY_ALL = "ANY_ALL"
    NULL_IF_NULL = "NULL_IF_NULL"
    REQUIRE_TYPE = "REQUIRE_TYPE"
    RETHROW = "RETHROW"


@dataclass
class CensusRow:
    idiom: CatalogIdiom
    cfg_count: int
    example_refs: list[tuple[MethodRef, list[int]]] = field(default_factory=list)


def _consecutive_runs(cfg: MethodCfg, wanted) -> list[set[int]]:
    """Weakly-connected components of the subgraph induced by ``wanted``
    nodes and the plain control edges between them; components of 2+ nodes
    are the instances."""
    members = {n.id for n in cfg.nodes if wanted(n)}
    adj: dict[int, set[int]] = {m: set() for m in members}
    for e in cfg.edges:
        if e.polarity == EdgePolarity.NONE and e.src in members and e.dst in members:
            adj[e.src].add(e.dst)
            adj[e.dst].add(e.src)
    seen: set[int] = set()
    runs: list[set[int]] = []
    for start in sorted(members):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        if len(comp) >= 2:
            runs.append(comp)
    return runs


def _detect_multiple_assignment(cfg: MethodCfg) -> list[set[int]]:
    return _consecutive_runs(cfg, lambda n: n.kind == NodeKind.ASSIGN)


def _detect_multiple_increment(cfg: MethodCfg) -> list[set[int]]:
    return _consecutive_runs(
        cfg,
        lambda n: n.kind == NodeKind.UNARY_UPDATE and n.operator_tags == [OpTag.INC],
    )


def _detect_unless(cfg: MethodCfg) -> list[set[int]]:
    return [
        {n.id}
        for n in cfg.nodes
        if n.kind == NodeKind.IF and n.operator_tags and n.operator_tags[0] == OpTag.NOT
    ]


def _detect_any_all(cfg: MethodCfg) -> list[set[int]]:
    out = []
    for n in cfg.nodes:
        if n.kind != NodeKind.IF:
            continue
        ands = n.operator_tags.count(OpTag.AND)
        ors = n.operator_tags.count(OpTag.OR)
        # homogeneous chains only; mixed && / || conditions are ambiguous
        if (ands >= 2 and ors == 0) or (ors >= 2 and ands == 0):
            out.append({n.id})
    return out


def _detect_null_if_null(cfg: MethodCfg) -> list[set[int]]:
    out = []
    for n in cfg.nodes:
        if n.kind != NodeKind.IF or n.literal_kinds != [LiteralTag.NULL] or len(n.uses) != 1:
            continue
        if n.operator_tags == [OpTag.NEQ]:
            exit_branch = EdgePolarity.FALSE_BRANCH  # guarded body form
        elif n.operator_tags == [OpTag.EQ]:
            exit_branch = EdgePolarity.TRUE_BRANCH   # early-return form
        else:
            continue
        target = cfg.branch_target(n.id, exit_branch)
        if target is None:
            continue
        t = cfg.node(target)
        if t.kind == NodeKind.RETURN and t.literal_kinds == [LiteralTag.NULL] and not t.uses:
            out.append({n.id, t.id})
    return out


def _detect_require_type(cfg: MethodCfg) -> list[set[int]]:
    out = []
    for n in cfg.nodes:
        if n.kind != NodeKind.IF or not n.operator_tags or n.operator_tags[0] != OpTag.INSTANCEOF:
            continue
        target = cfg.branch_target(n.id, EdgePolarity.FALSE_BRANCH)
        if target is not None and cfg.node(target).kind == NodeKind.THROW:
            out.append({n.id, target})
    return out


def _detect_rethrow(cfg: MethodCfg) -> list[set[int]]:
    out = []
    for n in cfg.nodes:
        if n.kind != NodeKind.CATCH:
            continue
        succs = cfg.successors(n.id)
        if len(succs) == 1 and cfg.node(succs[0][0]).kind == NodeKind.THROW:
            out.append({n.id, succs[0][0]})
    return out


_DETECTORS = {
    CatalogIdiom.MULTIPLE_ASSIGNMENT: _detect_multiple_assignment,
    CatalogIdiom.MULTIPLE_INCREMENT: _detect_multiple_increment,
    CatalogIdiom.UNLESS: _detect_unless,
    CatalogIdiom.ANY_ALL: _detect_any_all,
    CatalogIdiom.NULL_IF_NULL: _detect_null_if_null,
    CatalogIdiom.REQUIRE_TYPE: _detect_require_type,
    CatalogIdiom.RETHROW: _detect_rethrow,
}


def detect_idiom(cfg: MethodCfg, idiom: CatalogIdiom) -> list[set[int]]:
    """All instances of one idiom in one method, as node-id sets."""
    return _DETECTORS[idiom](cfg)


def census(db: list[MethodCfg], examples_per_idiom: int = 5) -> list[CensusRow]:
    """Methods containing each idiom at least once, with example locations."""
    rows = []
    for idiom in CatalogIdiom:
        count = 0
        examples: list[tuple[MethodRef, list[int]]] = []
        for cfg in db:
            instances = detect_idiom(cfg, idiom)
            if not instances:
                continue
            count += 1
            if len(examples) < examples_per_idiom:
                examples.append((cfg.method, sorted(instances[0])))
        rows.append(CensusRow(idiom=idiom, cfg_count=count, example_refs=examples))
    return rows
