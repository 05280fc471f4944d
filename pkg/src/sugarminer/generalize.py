"""Graph relabeling: project-specific information removal plus data-edge modifiers.

``generalize`` rewrites node labels to kind + re-applied type context +
literal categories + operator categories; ``baseline_label`` keeps the raw
source text instead (the no-abstraction comparison pipeline).  Both share
``annotate_data_edges``, which marks each existing control-flow edge with the
def/use overlap of its endpoints.  Neither transform touches topology.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .cfg import CfgNode, EdgePolarity, MethodCfg, MethodRef
from .vocab import (
    ARG_BUCKETS,
    LiteralTag,
    NodeKind,
    OpTag,
    TypeTag,
    arg_bucket,
    type_tag,
)


class DataEdgeModifier(str, Enum):
    DEF_DEF = "DEF_DEF"
    DEF_USE = "DEF_USE"
    USE_DEF = "USE_DEF"
    USE_USE = "USE_USE"


_TYPED_KINDS = (NodeKind.ASSIGN, NodeKind.VARDECL, NodeKind.UNARY_UPDATE)


@dataclass(frozen=True)
class GeneralLabel:
    kind: NodeKind
    type_ctx: TypeTag | None = None
    call_args: str | None = None
    literal_ctx: tuple[LiteralTag, ...] = ()
    op_ctx: tuple[OpTag, ...] = ()

    @property
    def canonical_text(self) -> str:
        parts = [self.kind.value]
        if self.type_ctx is not None:
            parts.append(self.type_ctx.value)
        if self.call_args is not None:
            parts.append(self.call_args)
        parts.extend(t.value for t in self.literal_ctx)
        parts.extend(t.value for t in self.op_ctx)
        return " ".join(parts)

    @staticmethod
    def parse(text: str) -> "GeneralLabel":
        tokens = text.split(" ")
        kind = NodeKind(tokens[0])
        type_ctx: TypeTag | None = None
        call_args: str | None = None
        literal_ctx: list[LiteralTag] = []
        op_ctx: list[OpTag] = []
        type_values = {t.value for t in TypeTag}
        lit_values = {t.value for t in LiteralTag}
        op_values = {t.value for t in OpTag}
        for tok in tokens[1:]:
            if tok in type_values and type_ctx is None and not literal_ctx and not op_ctx:
                type_ctx = TypeTag(tok)
            elif tok in ARG_BUCKETS:
                call_args = tok
            elif tok in lit_values:
                literal_ctx.append(LiteralTag(tok))
            elif tok in op_values:
                op_ctx.append(OpTag(tok))
            else:
                raise ValueError(f"unknown label token {tok!r} in {text!r}")
        return GeneralLabel(kind, type_ctx, call_args, tuple(literal_ctx), tuple(op_ctx))


@dataclass
class GeneralizedNode:
    id: int
    label: str  # canonical_text for generalized graphs, raw text for baseline


@dataclass
class GeneralizedEdge:
    src: int
    dst: int
    polarity: EdgePolarity
    modifiers: tuple[str, ...] = ()  # sorted DataEdgeModifier values

    @property
    def label(self) -> str:
        return f"{self.polarity.value}|{','.join(self.modifiers)}"


@dataclass
class GeneralizedCfg:
    method: MethodRef
    nodes: list[GeneralizedNode]
    edges: list[GeneralizedEdge]
    entry_id: int
    exit_id: int


def _declared_type_map(cfg: MethodCfg) -> dict[int, TypeTag | None]:
    """Per-node type context for assignment-like nodes, propagated from the
    nearest preceding declaration (parameters count as declarations; names
    never declared in the method resolve to UNKNOWN)."""
    env: dict[str, TypeTag] = {}
    for name, raw_type in cfg.params:
        base, dims = _split_raw_type(raw_type)
        env[name] = type_tag(base, dims)
    result: dict[int, TypeTag | None] = {}
    for node in cfg.nodes:
        if node.kind in _TYPED_KINDS:
            if node.kind == NodeKind.VARDECL:
                result[node.id] = node.declared_type
            else:
                target = _assigned_var(node)
                result[node.id] = env.get(target, TypeTag.UNKNOWN) if target else TypeTag.UNKNOWN
        if node.declared_type is not None and node.kind in (
            NodeKind.VARDECL, NodeKind.CATCH, NodeKind.LOOP
        ):
            for name in sorted(node.defs):
                env[name] = node.declared_type
    return result


def _split_raw_type(raw: str) -> tuple[str, int]:
    dims = raw.count("[]") + raw.count("...")
    base = raw.split("<")[0].split("[")[0].rstrip(".")
    base = base.split(".")[-1] if base else raw
    return base, dims


def _assigned_var(node: CfgNode) -> str | None:
    if node.kind == NodeKind.UNARY_UPDATE:
        # the updated variable is both def and use
        for name in sorted(node.defs):
            return name
        return None
    if not node.defs:
        return None
    if len(node.defs) == 1:
        return next(iter(node.defs))
    # multi-def assigns (a = b = 1): use the lexicographically first for context
    return sorted(node.defs)[0]


def generalize(cfg: MethodCfg) -> GeneralizedCfg:
    """Relabel every node with its generalized label; topology unchanged."""
    type_map = _declared_type_map(cfg)
    receiver_env = _receiver_type_env(cfg)
    nodes: list[GeneralizedNode] = []
    for node in cfg.nodes:
        type_ctx: TypeTag | None = None
        call_args: str | None = None
        if node.kind == NodeKind.METHOD_CALL:
            call_args = arg_bucket(node.call_arg_count or 0)
            type_ctx = TypeTag.UNKNOWN
            if node.call_receiver:
                type_ctx = receiver_env.get(node.id, {}).get(node.call_receiver, TypeTag.UNKNOWN)
        elif node.kind in _TYPED_KINDS:
            type_ctx = type_map.get(node.id) or TypeTag.UNKNOWN
        label = GeneralLabel(
            kind=node.kind,
            type_ctx=type_ctx,
            call_args=call_args,
            literal_ctx=tuple(node.literal_kinds),
            op_ctx=tuple(node.operator_tags),
        )
        nodes.append(GeneralizedNode(id=node.id, label=label.canonical_text))
    edges = [
        GeneralizedEdge(src=e.src, dst=e.dst, polarity=e.polarity)
        for e in cfg.edges
    ]
    g = GeneralizedCfg(
        method=cfg.method, nodes=nodes, edges=edges,
        entry_id=cfg.entry_id, exit_id=cfg.exit_id,
    )
    return annotate_data_edges(cfg, g)


def _receiver_type_env(cfg: MethodCfg) -> dict[int, dict[str, TypeTag]]:
    """Declared-type environment visible at each call node (same propagation
    walk as _declared_type_map, but keeps the whole environment)."""
    env: dict[str, TypeTag] = {}
    for name, raw_type in cfg.params:
        base, dims = _split_raw_type(raw_type)
        env[name] = type_tag(base, dims)
    result: dict[int, dict[str, TypeTag]] = {}
    for node in cfg.nodes:
        if node.kind == NodeKind.METHOD_CALL:
            result[node.id] = dict(env)
        if node.declared_type is not None and node.kind in (
            NodeKind.VARDECL, NodeKind.CATCH, NodeKind.LOOP
        ):
            for name in sorted(node.defs):
                env[name] = node.declared_type
    return result


def annotate_data_edges(cfg: MethodCfg, g: GeneralizedCfg) -> GeneralizedCfg:
    """Set each edge's modifier set from the endpoint defs/uses intersections.

    Modifiers decorate existing neighboring edges only; no new edges."""
    by_id = {n.id: n for n in cfg.nodes}
    for edge in g.edges:
        u, v = by_id[edge.src], by_id[edge.dst]
        mods: list[str] = []
        if u.defs & v.defs:
            mods.append(DataEdgeModifier.DEF_DEF.value)
        if u.defs & v.uses:
            mods.append(DataEdgeModifier.DEF_USE.value)
        if u.uses & v.defs:
            mods.append(DataEdgeModifier.USE_DEF.value)
        if u.uses & v.uses:
            mods.append(DataEdgeModifier.USE_USE.value)
        edge.modifiers = tuple(sorted(mods))
    return g


def baseline_label(cfg: MethodCfg, file_bytes: bytes) -> GeneralizedCfg:
    """No-generalization labeling: whitespace-normalized source text per node.

    ENTRY and EXIT have no statement of their own and keep their kind names,
    mirroring the generalized pipeline so only statement labels differ."""
    nodes: list[GeneralizedNode] = []
    for node in cfg.nodes:
        if node.kind in (NodeKind.ENTRY, NodeKind.EXIT):
            text = node.kind.value
        else:
            start, end = node.span
            raw = file_bytes[start:end].decode("utf-8", errors="replace")
            text = " ".join(raw.split())
        nodes.append(GeneralizedNode(id=node.id, label=text))
    edges = [
        GeneralizedEdge(src=e.src, dst=e.dst, polarity=e.polarity)
        for e in cfg.edges
    ]
    g = GeneralizedCfg(
        method=cfg.method, nodes=nodes, edges=edges,
        entry_id=cfg.entry_id, exit_id=cfg.exit_id,
    )
    return annotate_data_edges(cfg, g)
