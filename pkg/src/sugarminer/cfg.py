"""Per-method control-flow graphs over the parsed statement trees.

One node per statement-level construct plus ENTRY/EXIT.  Condition
expressions live in their IF/LOOP/SWITCH node.  Def/use sets are computed
intra-procedurally by simple name; a field accessed through an explicit
receiver counts as a use of the receiver variable ("this" for implicit
receiver syntax like ``this.f``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import javaparser as jp
from .vocab import LiteralTag, NodeKind, OpTag, TypeTag, type_tag


class EdgePolarity(str, Enum):
    NONE = "NONE"
    TRUE_BRANCH = "TRUE"
    FALSE_BRANCH = "FALSE"
    EXCEPTION = "EXCEPTION"


@dataclass(frozen=True)
class MethodRef:
    file_path: str        # corpus-relative, posix separators
    method_signature: str
    method_index: int     # 0-based ordinal within the file

    def to_json(self) -> dict:
        return {
            "file_path": self.file_path,
            "method_signature": self.method_signature,
            "method_index": self.method_index,
        }

    @staticmethod
    def from_json(d: dict) -> "MethodRef":
        return MethodRef(d["file_path"], d["method_signature"], d["method_index"])


@dataclass
class CfgNode:
    id: int
    kind: NodeKind
    declared_type: TypeTag | None = None     # VARDECL/CATCH/for-each LOOP
    literal_kinds: list[LiteralTag] = field(default_factory=list)
    operator_tags: list[OpTag] = field(default_factory=list)
    defs: set[str] = field(default_factory=set)
    uses: set[str] = field(default_factory=set)
    span: tuple[int, int] = (0, 0)
    # extra raw facts used by sugar detectors
    call_arg_count: int | None = None        # METHOD_CALL nodes
    call_receiver: str | None = None         # simple-name receiver if any
    field_target: bool = False               # assignment target is an explicit
                                             # receiver field access (this.f = ..)


@dataclass
class CfgEdge:
    src: int
    dst: int
    polarity: EdgePolarity = EdgePolarity.NONE


@dataclass
class MethodCfg:
    method: MethodRef
    nodes: list[CfgNode]
    edges: list[CfgEdge]
    entry_id: int
    exit_id: int
    params: list[tuple[str, str]] = field(default_factory=list)  # (name, type raw)

    def node(self, node_id: int) -> CfgNode:
        return self.nodes[node_id]

    def successors(self, node_id: int) -> list[tuple[int, EdgePolarity]]:
        return [(e.dst, e.polarity) for e in self.edges if e.src == node_id]

    def branch_target(self, node_id: int, polarity: EdgePolarity) -> int | None:
        for e in self.edges:
            if e.src == node_id and e.polarity == polarity:
                return e.dst
        return None

    def param_names(self) -> set[str]:
        return {name for name, _ in self.params}


class CfgBuildError(Exception):
    """Method-level construction failure; carries the offending MethodRef."""

    def __init__(self, ref: MethodRef, reason: str):
        super().__init__(f"{ref.file_path}#{ref.method_index}: {reason}")
        self.ref = ref
        self.reason = reason


# ---------------------------------------------------------------------------
# Expression facts
# ---------------------------------------------------------------------------

_BINARY_OPS = {
    "||": OpTag.OR, "&&": OpTag.AND,
    "|": OpTag.BIT_OR, "^": OpTag.BIT_XOR, "&": OpTag.BIT_AND,
    "==": OpTag.EQ, "!=": OpTag.NEQ,
    "<": OpTag.LT, "<=": OpTag.LE, ">": OpTag.GT, ">=": OpTag.GE,
    "<<": OpTag.SHL, ">>": OpTag.SHR, ">>>": OpTag.USHR,
    "+": OpTag.PLUS, "-": OpTag.MINUS,
    "*": OpTag.TIMES, "/": OpTag.DIV, "%": OpTag.MOD,
}

_COMPOUND_OPS = {
    "+=": OpTag.PLUS, "-=": OpTag.MINUS, "*=": OpTag.TIMES, "/=": OpTag.DIV,
    "%=": OpTag.MOD, "&=": OpTag.BIT_AND, "|=": OpTag.BIT_OR, "^=": OpTag.BIT_XOR,
    "<<=": OpTag.SHL, ">>=": OpTag.SHR, ">>>=": OpTag.USHR,
}

_UNARY_OPS = {
    "!": OpTag.NOT, "~": OpTag.BIT_NOT, "++": OpTag.INC, "--": OpTag.DEC,
    "-": OpTag.NEG,
}

_LIT_TAGS = {
    "int": LiteralTag.INT_LIT,
    "float": LiteralTag.FLOAT_LIT,
    "str": LiteralTag.STRING_LIT,
    "char": LiteralTag.CHAR_LIT,
    "bool": LiteralTag.BOOL_LIT,
    "null": LiteralTag.NULL,
}


@dataclass
class ExprFacts:
    literals: list[LiteralTag] = field(default_factory=list)
    operators: list[OpTag] = field(default_factory=list)
    defs: set[str] = field(default_factory=set)
    uses: set[str] = field(default_factory=set)

    def merge(self, other: "ExprFacts") -> None:
        self.literals.extend(other.literals)
        self.operators.extend(other.operators)
        self.defs |= other.defs
        self.uses |= other.uses


def _receiver_root_use(expr: jp.Expr, facts: ExprFacts) -> None:
    """Record the use contributed by an explicit receiver (``this`` included)."""
    if isinstance(expr, jp.This):
        facts.uses.add("this")
    else:
        _walk_expr(expr, facts)


def _walk_expr(expr: jp.Expr | None, facts: ExprFacts) -> None:
    """Pre-order walk: a node's operator tag precedes its children's."""
    if expr is None:
        return
    if isinstance(expr, jp.Lit):
        facts.literals.append(_LIT_TAGS[expr.category])
    elif isinstance(expr, jp.Name):
        facts.uses.add(expr.ident)
    elif isinstance(expr, (jp.This, jp.Super)):
        pass  # bare this/super reads no variable
    elif isinstance(expr, jp.FieldAccess):
        _receiver_root_use(expr.receiver, facts)
    elif isinstance(expr, jp.ArrayAccess):
        _walk_expr(expr.array, facts)
        _walk_expr(expr.index, facts)
    elif isinstance(expr, jp.Call):
        if expr.receiver is not None:
            _receiver_root_use(expr.receiver, facts)
        for a in expr.args:
            _walk_expr(a, facts)
    elif isinstance(expr, jp.New):
        for a in expr.args:
            _walk_expr(a, facts)
        for d in expr.dims:
            _walk_expr(d, facts)
    elif isinstance(expr, jp.Unary):
        if expr.op != "+":  # unary plus is a no-op
            facts.operators.append(_UNARY_OPS[expr.op])
        if expr.op in ("++", "--") and isinstance(expr.operand, jp.Name):
            facts.defs.add(expr.operand.ident)
            facts.uses.add(expr.operand.ident)
        else:
            _walk_expr(expr.operand, facts)
    elif isinstance(expr, jp.Binary):
        facts.operators.append(_BINARY_OPS[expr.op])
        _walk_expr(expr.left, facts)
        _walk_expr(expr.right, facts)
    elif isinstance(expr, jp.InstanceOf):
        facts.operators.append(OpTag.INSTANCEOF)
        _walk_expr(expr.value, facts)
    elif isinstance(expr, jp.Ternary):
        facts.operators.append(OpTag.TERNARY)
        _walk_expr(expr.cond, facts)
        _walk_expr(expr.then, facts)
        _walk_expr(expr.other, facts)
    elif isinstance(expr, jp.Assign):
        if expr.op != "=":
            facts.operators.append(_COMPOUND_OPS[expr.op])
        _walk_assign_target(expr.target, compound=expr.op != "=", facts=facts)
        _walk_expr(expr.value, facts)
    elif isinstance(expr, jp.Cast):
        _walk_expr(expr.value, facts)
    elif isinstance(expr, jp.MethodRef):
        if expr.receiver is not None and isinstance(expr.receiver, jp.Name):
            facts.uses.add(expr.receiver.ident)
    elif isinstance(expr, jp.ArrayInit):
        for item in expr.items:
            _walk_expr(item, facts)
    # Lambda / OpaqueExpr: nothing inside is modeled


def _walk_assign_target(target: jp.Expr, compound: bool, facts: ExprFacts) -> None:
    if isinstance(target, jp.Name):
        facts.defs.add(target.ident)
        if compound:
            facts.uses.add(target.ident)
    elif isinstance(target, jp.FieldAccess):
        _receiver_root_use(target.receiver, facts)
    elif isinstance(target, jp.ArrayAccess):
        _walk_expr(target.array, facts)
        _walk_expr(target.index, facts)
    else:
        _walk_expr(target, facts)


def expr_facts(expr: jp.Expr | None) -> ExprFacts:
    facts = ExprFacts()
    _walk_expr(expr, facts)
    return facts


def stmt_facts(stmt: jp.Stmt) -> ExprFacts:
    """Facts of the statement's own expression(s): the inputs to defs_uses."""
    facts = ExprFacts()
    if isinstance(stmt, jp.VarDeclStmt):
        for d in stmt.declarators:
            facts.defs.add(d.name)
            if d.init is not None:
                facts.merge(expr_facts(d.init))
    elif isinstance(stmt, jp.ExprStmt):
        facts.merge(expr_facts(stmt.expr))
    elif isinstance(stmt, jp.ThrowStmt):
        facts.merge(expr_facts(stmt.expr))
    elif isinstance(stmt, jp.ReturnStmt):
        facts.merge(expr_facts(stmt.expr))
    elif isinstance(stmt, (jp.IfStmt, jp.WhileStmt, jp.DoWhileStmt)):
        facts.merge(expr_facts(stmt.cond))
    elif isinstance(stmt, jp.ForStmt):
        facts.merge(expr_facts(stmt.cond))
    elif isinstance(stmt, jp.ForEachStmt):
        facts.defs.add(stmt.var_name)
        facts.merge(expr_facts(stmt.iterable))
    elif isinstance(stmt, jp.SwitchStmt):
        facts.merge(expr_facts(stmt.selector))
    elif isinstance(stmt, jp.SyncStmt):
        facts.merge(expr_facts(stmt.lock))
    return facts


def defs_uses(stmt: jp.Stmt) -> tuple[set[str], set[str]]:
    """Defined and used simple names of one statement's expression facts."""
    facts = stmt_facts(stmt)
    return facts.defs, facts.uses


# ---------------------------------------------------------------------------
# CFG construction
# ---------------------------------------------------------------------------

_Pending = list[tuple[int, EdgePolarity]]


class _Builder:
    def __init__(self, ref: MethodRef, params: list[jp.Param]):
        self.ref = ref
        self.nodes: list[CfgNode] = []
        self.edges: list[CfgEdge] = []
        self.params = params
        self.loop_stack: list[dict] = []   # continue targets, per loop
        self.break_stack: list[_Pending] = []  # loops and switches, innermost last
        self.returns: list[int] = []

    def new_node(self, kind: NodeKind, span: tuple[int, int],
                 facts: ExprFacts | None = None,
                 declared_type: TypeTag | None = None) -> int:
        node = CfgNode(id=len(self.nodes), kind=kind, span=span)
        if facts is not None:
            node.literal_kinds = facts.literals
            node.operator_tags = facts.operators
            node.defs = facts.defs
            node.uses = facts.uses
        node.declared_type = declared_type
        self.nodes.append(node)
        return node.id

    def wire(self, pending: _Pending, dst: int) -> None:
        for src, pol in pending:
            self.edges.append(CfgEdge(src=src, dst=dst, polarity=pol))

    # -- statement lowering --------------------------------------------------

    def build_seq(self, stmts: list[jp.Stmt], pending: _Pending) -> _Pending:
        for stmt in stmts:
            if not pending:
                break  # unreachable tail: no nodes emitted
            pending = self.build_stmt(stmt, pending)
        return pending

    def build_stmt(self, stmt: jp.Stmt, pending: _Pending) -> _Pending:
        if isinstance(stmt, jp.BlockStmt):
            return self.build_seq(stmt.body, pending)

        if isinstance(stmt, jp.VarDeclStmt):
            facts = stmt_facts(stmt)
            tag = type_tag(stmt.type_info.base, stmt.type_info.dims)
            nid = self.new_node(NodeKind.VARDECL, stmt.span, facts, declared_type=tag)
            self.wire(pending, nid)
            return [(nid, EdgePolarity.NONE)]

        if isinstance(stmt, jp.ExprStmt):
            return self._build_expr_stmt(stmt, pending)

        if isinstance(stmt, jp.IfStmt):
            facts = stmt_facts(stmt)
            cid = self.new_node(NodeKind.IF, stmt.span, facts)
            self.wire(pending, cid)
            then_exits = self.build_seq(stmt.then, [(cid, EdgePolarity.TRUE_BRANCH)])
            if stmt.orelse is not None:
                else_exits = self.build_seq(stmt.orelse, [(cid, EdgePolarity.FALSE_BRANCH)])
            else:
                else_exits = [(cid, EdgePolarity.FALSE_BRANCH)]
            return then_exits + else_exits

        if isinstance(stmt, jp.WhileStmt):
            facts = expr_facts(stmt.cond) if stmt.cond is not None else ExprFacts()
            lid = self.new_node(NodeKind.LOOP, stmt.span, facts)
            self.wire(pending, lid)
            frame = {"continue_target": lid, "breaks": [], "continues": []}
            self.loop_stack.append(frame)
            self.break_stack.append(frame["breaks"])
            body_exits = self.build_seq(stmt.body, [(lid, EdgePolarity.TRUE_BRANCH)])
            if not stmt.body:
                # empty body would self-loop; keep only the FALSE exit
                body_exits = []
            self.break_stack.pop()
            self.loop_stack.pop()
            self.wire(body_exits, lid)
            self.wire(frame["continues"], lid)
            return [(lid, EdgePolarity.FALSE_BRANCH)] + frame["breaks"]

        if isinstance(stmt, jp.DoWhileStmt):
            facts = expr_facts(stmt.cond) if stmt.cond is not None else ExprFacts()
            lid = self.new_node(NodeKind.LOOP, stmt.span, facts)
            frame = {"continue_target": lid, "breaks": [], "continues": []}
            self.loop_stack.append(frame)
            self.break_stack.append(frame["breaks"])
            body_entry_pending = pending + [(lid, EdgePolarity.TRUE_BRANCH)]
            body_exits = self.build_seq(stmt.body, body_entry_pending)
            self.break_stack.pop()
            self.loop_stack.pop()
            self.wire(body_exits, lid)
            self.wire(frame["continues"], lid)
            return [(lid, EdgePolarity.FALSE_BRANCH)] + frame["breaks"]

        if isinstance(stmt, jp.ForStmt):
            pending = self.build_seq(stmt.init, pending)
            facts = expr_facts(stmt.cond) if stmt.cond is not None else ExprFacts()
            lid = self.new_node(NodeKind.LOOP, stmt.span, facts)
            self.wire(pending, lid)
            frame = {"continue_target": None, "breaks": [], "continues": []}
            self.loop_stack.append(frame)
            self.break_stack.append(frame["breaks"])
            body_exits = self.build_seq(stmt.body, [(lid, EdgePolarity.TRUE_BRANCH)])
            self.break_stack.pop()
            self.loop_stack.pop()
            back = body_exits + frame["continues"]
            for upd in stmt.update:
                if not back:
                    break
                back = self.build_stmt(upd, back)
            self.wire(back, lid)
            return [(lid, EdgePolarity.FALSE_BRANCH)] + frame["breaks"]

        if isinstance(stmt, jp.ForEachStmt):
            facts = stmt_facts(stmt)
            tag = type_tag(stmt.type_info.base, stmt.type_info.dims)
            lid = self.new_node(NodeKind.LOOP, stmt.span, facts, declared_type=tag)
            self.wire(pending, lid)
            frame = {"continue_target": lid, "breaks": [], "continues": []}
            self.loop_stack.append(frame)
            self.break_stack.append(frame["breaks"])
            body_exits = self.build_seq(stmt.body, [(lid, EdgePolarity.TRUE_BRANCH)])
            if not stmt.body:
                body_exits = []
            self.break_stack.pop()
            self.loop_stack.pop()
            self.wire(body_exits, lid)
            self.wire(frame["continues"], lid)
            return [(lid, EdgePolarity.FALSE_BRANCH)] + frame["breaks"]

        if isinstance(stmt, jp.SwitchStmt):
            facts = expr_facts(stmt.selector)
            sid = self.new_node(NodeKind.SWITCH, stmt.span, facts)
            self.wire(pending, sid)
            breaks: _Pending = []
            self.break_stack.append(breaks)
            fallthrough: _Pending = []
            for group in stmt.groups:
                entry = fallthrough + [(sid, EdgePolarity.NONE)]
                exits = self.build_seq(group.stmts, entry)
                if group.arrow:
                    breaks.extend(exits)
                    fallthrough = []
                else:
                    fallthrough = exits
            self.break_stack.pop()
            result = fallthrough + breaks
            if not stmt.has_default:
                result.append((sid, EdgePolarity.NONE))
            return result

        if isinstance(stmt, jp.TryStmt):
            tid = self.new_node(NodeKind.TRY, stmt.span, ExprFacts())
            self.wire(pending, tid)
            inner: _Pending = [(tid, EdgePolarity.NONE)]
            for res in stmt.resources:
                inner = self.build_stmt(res, inner)
            body_exits = self.build_seq(stmt.body, inner)
            catch_exits: _Pending = []
            for clause in stmt.catches:
                cfacts = ExprFacts()
                if clause.var_name:
                    cfacts.defs.add(clause.var_name)
                ctag = type_tag(clause.type_info.base, clause.type_info.dims)
                cid = self.new_node(NodeKind.CATCH, clause.span, cfacts, declared_type=ctag)
                self.edges.append(CfgEdge(tid, cid, EdgePolarity.EXCEPTION))
                exits = self.build_seq(clause.body, [(cid, EdgePolarity.NONE)])
                catch_exits.extend(exits)
            merged = body_exits + catch_exits
            if stmt.final_body is not None:
                fid = self.new_node(NodeKind.FINALLY, stmt.final_span, ExprFacts())
                self.wire(merged, fid)
                fin_exits = self.build_seq(stmt.final_body, [(fid, EdgePolarity.NONE)])
                return fin_exits
            return merged

        if isinstance(stmt, jp.ThrowStmt):
            facts = stmt_facts(stmt)
            nid = self.new_node(NodeKind.THROW, stmt.span, facts)
            self.wire(pending, nid)
            return []  # throw is a sink: only TRY headers model exception flow

        if isinstance(stmt, jp.ReturnStmt):
            facts = stmt_facts(stmt)
            nid = self.new_node(NodeKind.RETURN, stmt.span, facts)
            self.wire(pending, nid)
            self.returns.append(nid)
            return []

        if isinstance(stmt, jp.BreakStmt):
            nid = self.new_node(NodeKind.BREAK, stmt.span, ExprFacts())
            self.wire(pending, nid)
            if self.break_stack:
                self.break_stack[-1].append((nid, EdgePolarity.NONE))
                return []
            return [(nid, EdgePolarity.NONE)]  # stray break: fall through

        if isinstance(stmt, jp.ContinueStmt):
            nid = self.new_node(NodeKind.CONTINUE, stmt.span, ExprFacts())
            self.wire(pending, nid)
            if self.loop_stack:
                self.loop_stack[-1]["continues"].append((nid, EdgePolarity.NONE))
                return []
            return [(nid, EdgePolarity.NONE)]

        if isinstance(stmt, jp.SyncStmt):
            facts = stmt_facts(stmt)
            nid = self.new_node(NodeKind.SYNC, stmt.span, facts)
            self.wire(pending, nid)
            exits = self.build_seq(stmt.body, [(nid, EdgePolarity.NONE)])
            return exits

        # OtherStmt and anything unanticipated
        nid = self.new_node(NodeKind.OTHER, stmt.span, ExprFacts())
        self.wire(pending, nid)
        return [(nid, EdgePolarity.NONE)]

    def _build_expr_stmt(self, stmt: jp.ExprStmt, pending: _Pending) -> _Pending:
        expr = stmt.expr
        facts = expr_facts(expr)
        kind = NodeKind.OTHER
        node_extra: dict = {}
        if isinstance(expr, jp.Assign):
            kind = NodeKind.ASSIGN
            if isinstance(expr.target, jp.FieldAccess):
                node_extra["field_target"] = True
        elif isinstance(expr, jp.Unary) and expr.op in ("++", "--"):
            kind = NodeKind.UNARY_UPDATE
        elif isinstance(expr, (jp.Call, jp.New)):
            kind = NodeKind.METHOD_CALL
            if isinstance(expr, jp.Call):
                node_extra["call_arg_count"] = len(expr.args)
                if expr.receiver is not None and isinstance(expr.receiver, jp.Name):
                    node_extra["call_receiver"] = expr.receiver.ident
            else:
                node_extra["call_arg_count"] = len(expr.args)
        elif isinstance(expr, jp.MethodRef):
            kind = NodeKind.OTHER
        nid = self.new_node(kind, stmt.span, facts)
        for key, value in node_extra.items():
            setattr(self.nodes[nid], key, value)
        self.wire(pending, nid)
        return [(nid, EdgePolarity.NONE)]


def build_cfg(body_stmts: list[jp.Stmt], ref: MethodRef,
              params: list[jp.Param],
              header_span: tuple[int, int],
              exit_span: tuple[int, int]) -> MethodCfg:
    builder = _Builder(ref, params)
    entry_id = builder.new_node(NodeKind.ENTRY, header_span, ExprFacts())
    exits = builder.build_seq(body_stmts, [(entry_id, EdgePolarity.NONE)])
    exit_id = builder.new_node(NodeKind.EXIT, exit_span, ExprFacts())
    builder.wire(exits, exit_id)
    for ret in builder.returns:
        builder.edges.append(CfgEdge(ret, exit_id, EdgePolarity.NONE))
    cfg = MethodCfg(
        method=ref,
        nodes=builder.nodes,
        edges=builder.edges,
        entry_id=entry_id,
        exit_id=exit_id,
        params=[(p.name, p.type_info.raw) for p in params],
    )
    return _compact_reachable(cfg)


def _compact_reachable(cfg: MethodCfg) -> MethodCfg:
    """Drop nodes unreachable from ENTRY (dead loop headers after throws,
    etc.) and renumber ids densely.  EXIT is always kept: when every path
    throws it simply has no incoming edges."""
    adj: dict[int, list[int]] = {}
    for e in cfg.edges:
        adj.setdefault(e.src, []).append(e.dst)
    seen = {cfg.entry_id}
    stack = [cfg.entry_id]
    while stack:
        n = stack.pop()
        for m in adj.get(n, ()):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    seen.add(cfg.exit_id)
    keep = sorted(seen)
    if len(keep) == len(cfg.nodes):
        return cfg
    remap = {old: new for new, old in enumerate(keep)}
    nodes = []
    for old in keep:
        node = cfg.nodes[old]
        node.id = remap[old]
        nodes.append(node)
    edges = [
        CfgEdge(remap[e.src], remap[e.dst], e.polarity)
        for e in cfg.edges
        if e.src in remap and e.dst in remap
    ]
    return MethodCfg(
        method=cfg.method,
        nodes=nodes,
        edges=edges,
        entry_id=remap[cfg.entry_id],
        exit_id=remap[cfg.exit_id],
        params=cfg.params,
    )


def build_cfg_from_source(source: str, ref: MethodRef) -> MethodCfg:
    """Build the CFG of the first method found in a source fragment.

    The fragment must contain a full method declaration; wrap free-standing
    methods in a class if needed.  Testing and snippet convenience.
    """
    text = source if "class" in source or "interface" in source or "enum" in source \
        else "class __W { " + source + " }"
    toks = jp.tokenize(text)
    match = jp.match_delimiters(toks)
    methods = jp.scan_methods(toks, match)
    if not methods:
        raise CfgBuildError(ref, "no method found in fragment")
    return build_method_cfg(text, toks, match, methods[0], ref)


def build_method_cfg(source: str, toks: list[jp.Token], match: dict[int, int],
                     raw: jp.RawMethod, ref: MethodRef) -> MethodCfg:
    try:
        stmts = jp.parse_method_body(toks, match, raw.body_toks)
    except jp._Backtrack as exc:  # defensive: parser should self-recover
        raise CfgBuildError(ref, f"statement parse failed: {exc}") from exc
    header_span = (raw.header_start, raw.body_open + 1)
    exit_span = (max(raw.body_close - 1, 0), raw.body_close)
    return build_cfg(stmts, ref, raw.params, header_span, exit_span)


def validate_cfg(cfg: MethodCfg) -> list[str]:
    """Structural invariant check; returns a list of violations (empty = ok)."""
    problems: list[str] = []
    ids = {n.id for n in cfg.nodes}
    if sorted(ids) != list(range(len(cfg.nodes))):
        problems.append("node ids are not dense")
    kinds = [n.kind for n in cfg.nodes]
    if kinds.count(NodeKind.ENTRY) != 1 or kinds.count(NodeKind.EXIT) != 1:
        problems.append("must have exactly one ENTRY and one EXIT")
    for e in cfg.edges:
        if e.src not in ids or e.dst not in ids:
            problems.append(f"edge endpoint missing: {e}")
        if e.src == e.dst:
            problems.append(f"self loop at {e.src}")
    entry, exit_ = cfg.node(cfg.entry_id), cfg.node(cfg.exit_id)
    if any(e.dst == entry.id for e in cfg.edges):
        problems.append("ENTRY has incoming edges")
    if any(e.src == exit_.id for e in cfg.edges):
        problems.append("EXIT has outgoing edges")
    if entry.defs or entry.uses or entry.operator_tags:
        problems.append("ENTRY carries expression facts")
    if exit_.defs or exit_.uses or exit_.operator_tags:
        problems.append("EXIT carries expression facts")
    # reachability: every node except EXIT (unreachable when all paths throw)
    adj: dict[int, list[int]] = {}
    for e in cfg.edges:
        adj.setdefault(e.src, []).append(e.dst)
    seen = {cfg.entry_id}
    stack = [cfg.entry_id]
    while stack:
        n = stack.pop()
        for m in adj.get(n, ()):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    for n in cfg.nodes:
        if n.id not in seen and n.id != cfg.exit_id:
            problems.append(f"node {n.id} ({n.kind}) unreachable from ENTRY")
    # IF branch shape
    for n in cfg.nodes:
        if n.kind == NodeKind.IF:
            pols = [e.polarity for e in cfg.edges if e.src == n.id]
            if pols.count(EdgePolarity.TRUE_BRANCH) != 1 or pols.count(EdgePolarity.FALSE_BRANCH) != 1:
                problems.append(f"IF node {n.id} lacks exactly one TRUE and one FALSE edge")
    return problems
