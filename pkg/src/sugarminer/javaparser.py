"""Tokenizer, method scanner, and statement parser for a Java source subset.

The parser is deliberately shallow.  It recognizes the statement forms the
CFG builder models (declarations, assignments, unary updates, calls, if/else,
loops, switch, try/catch/finally, throw, return, break/continue, synchronized,
blocks) and degrades to opaque statements for everything else, so a method
body never fails to parse once its file tokenizes and its delimiters balance.
No name binding or type checking happens here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class JavaSyntaxError(Exception):
    """File-level lexical or structural failure (unterminated, unbalanced)."""


class _Backtrack(Exception):
    """Internal: a speculative parse did not apply."""


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while
    """.split()
)

PRIMITIVES = frozenset("boolean byte char double float int long short void".split())

MODIFIERS = frozenset(
    "public protected private static final abstract synchronized native"
    " strictfp transient volatile default".split()
)

# Longest-match order matters.
_OPERATORS = [
    ">>>=", ">>>", ">>=", "<<=", "...",
    "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~",
    "?", ":", ".", ",", ";", "(", ")", "{", "}", "[", "]", "@",
]

_NUM_RE = re.compile(
    r"""
    0[xX][0-9a-fA-F_]+[lL]? |
    0[bB][01_]+[lL]? |
    (?:\d[\d_]*\.[\d_]*|\.\d[\d_]*|\d[\d_]*)(?:[eE][+-]?\d+)?[fFdDlL]?
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # id | kw | int | float | str | char | bool | null | op
    text: str
    start: int  # char offset in the decoded source
    end: int


def _is_float_literal(text: str) -> bool:
    if text[:2].lower() in ("0x", "0b"):
        return False
    return any(c in text for c in ".eE") or text[-1] in "fFdD"


def tokenize(source: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c == "/" and i + 1 < n:
            nxt = source[i + 1]
            if nxt == "/":
                j = source.find("\n", i)
                i = n if j < 0 else j + 1
                continue
            if nxt == "*":
                j = source.find("*/", i + 2)
                if j < 0:
                    raise JavaSyntaxError(f"unterminated block comment at offset {i}")
                i = j + 2
                continue
        if c == '"':
            if source.startswith('"""', i):
                j = source.find('"""', i + 3)
                if j < 0:
                    raise JavaSyntaxError(f"unterminated text block at offset {i}")
                toks.append(Token("str", source[i : j + 3], i, j + 3))
                i = j + 3
                continue
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == '"':
                    break
                if source[j] == "\n":
                    raise JavaSyntaxError(f"unterminated string at offset {i}")
                j += 1
            if j >= n:
                raise JavaSyntaxError(f"unterminated string at offset {i}")
            toks.append(Token("str", source[i : j + 1], i, j + 1))
            i = j + 1
            continue
        if c == "'":
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == "'":
                    break
                j += 1
            if j >= n:
                raise JavaSyntaxError(f"unterminated char literal at offset {i}")
            toks.append(Token("char", source[i : j + 1], i, j + 1))
            i = j + 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUM_RE.match(source, i)
            if not m:
                raise JavaSyntaxError(f"bad numeric literal at offset {i}")
            text = m.group(0)
            kind = "float" if _is_float_literal(text) else "int"
            toks.append(Token(kind, text, i, m.end()))
            i = m.end()
            continue
        if c.isalpha() or c in "_$":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            text = source[i:j]
            if text in ("true", "false"):
                kind = "bool"
            elif text == "null":
                kind = "null"
            elif text in KEYWORDS:
                kind = "kw"
            else:
                kind = "id"
            toks.append(Token(kind, text, i, j))
            i = j
            continue
        for op in _OPERATORS:
            if source.startswith(op, i):
                toks.append(Token("op", op, i, i + len(op)))
                i += len(op)
                break
        else:
            raise JavaSyntaxError(f"unexpected character {c!r} at offset {i}")
    return toks


_OPEN = {"(": ")", "{": "}", "[": "]"}


def match_delimiters(toks: list[Token]) -> dict[int, int]:
    """Map each opening-delimiter token index to its closing index.

    Raises JavaSyntaxError when the file does not balance; callers treat
    that as an unparseable file.
    """
    match: dict[int, int] = {}
    stack: list[tuple[str, int]] = []
    for idx, t in enumerate(toks):
        if t.kind != "op":
            continue
        if t.text in _OPEN:
            stack.append((t.text, idx))
        elif t.text in (")", "}", "]"):
            if not stack or _OPEN[stack[-1][0]] != t.text:
                raise JavaSyntaxError(f"unbalanced {t.text!r} at offset {t.start}")
            _, open_idx = stack.pop()
            match[open_idx] = idx
    if stack:
        t = toks[stack[-1][1]]
        raise JavaSyntaxError(f"unclosed {t.text!r} at offset {t.start}")
    return match


# ---------------------------------------------------------------------------
# Types and method scanning
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TypeInfo:
    raw: str    # source spelling, spaces stripped, e.g. "java.util.List<String>[]"
    base: str   # simple base name used for tagging, e.g. "List"
    dims: int


@dataclass
class Param:
    name: str
    type_info: TypeInfo


@dataclass
class RawMethod:
    name: str
    signature: str                 # name(T1,T2) with raw parameter types
    params: list[Param]
    header_start: int              # char offset of the declaration start
    body_open: int                 # char offset of '{'
    body_close: int                # char offset just past '}'
    body_toks: tuple[int, int]     # token index range (open_brace, close_brace)


class _TokenCursor:
    def __init__(self, toks: list[Token], match: dict[int, int]):
        self.toks = toks
        self.match = match

    def text(self, i: int) -> str:
        return self.toks[i].text if 0 <= i < len(self.toks) else ""

    def kind(self, i: int) -> str:
        return self.toks[i].kind if 0 <= i < len(self.toks) else "eof"

    def is_op(self, i: int, text: str) -> bool:
        return self.kind(i) == "op" and self.text(i) == text

    def skip_annotations(self, i: int) -> int:
        while self.is_op(i, "@"):
            i += 1
            if self.kind(i) in ("id", "kw"):  # '@interface' also lands here
                i += 1
                while self.is_op(i, ".") and self.kind(i + 1) == "id":
                    i += 2
            if self.is_op(i, "("):
                i = self.match[i] + 1
        return i

    def skip_generics(self, i: int) -> int:
        """Skip a balanced <...> starting at i; returns i unchanged if it
        cannot be a type-argument list."""
        if not self.is_op(i, "<"):
            return i
        depth = 0
        j = i
        while j < len(self.toks):
            t = self.text(j)
            if t == "<":
                depth += 1
            elif t == ">":
                depth -= 1
            elif t == ">>":
                depth -= 2
            elif t == ">>>":
                depth -= 3
            elif t in (";", "{", ")") or depth == 0:
                return i
            j += 1
            if depth <= 0:
                return j
        return i

    def parse_type(self, i: int) -> tuple[TypeInfo, int] | None:
        i = self.skip_annotations(i)
        parts: list[str] = []
        if self.kind(i) == "kw" and self.text(i) in PRIMITIVES:
            base = self.text(i)
            parts.append(base)
            i += 1
        elif self.kind(i) == "id" or (self.kind(i) == "kw" and self.text(i) == "var"):
            parts.append(self.text(i))
            base = self.text(i)
            i += 1
            j = self.skip_generics(i)
            if j != i:
                parts.append("<>")
                i = j
            while self.is_op(i, ".") and self.kind(i + 1) == "id":
                parts.append("." + self.text(i + 1))
                base = self.text(i + 1)
                i += 2
                j = self.skip_generics(i)
                if j != i:
                    parts.append("<>")
                    i = j
        else:
            return None
        dims = 0
        while self.is_op(i, "[") and self.is_op(i + 1, "]"):
            dims += 1
            parts.append("[]")
            i += 2
        return TypeInfo("".join(parts), base, dims), i


_TYPE_KEYWORDS = ("class", "interface", "enum")


def scan_methods(toks: list[Token], match: dict[int, int]) -> list[RawMethod]:
    """Find every concrete method or constructor body in declaration order."""
    cur = _TokenCursor(toks, match)
    methods: list[RawMethod] = []
    _scan_compilation_unit(cur, methods)
    return methods


def _scan_compilation_unit(cur: _TokenCursor, out: list[RawMethod]) -> None:
    i = 0
    n = len(cur.toks)
    while i < n:
        if cur.kind(i) == "kw" and cur.text(i) in _TYPE_KEYWORDS:
            i = _scan_type_decl(cur, i, out)
        elif cur.kind(i) == "id" and cur.text(i) == "record" and cur.kind(i + 1) == "id":
            i = _scan_type_decl(cur, i, out)
        else:
            i += 1


def _scan_type_decl(cur: _TokenCursor, i: int, out: list[RawMethod]) -> int:
    keyword = cur.text(i)
    i += 1
    type_name = cur.text(i) if cur.kind(i) == "id" else ""
    # Skip the header (type params, extends/implements/permits, record components)
    # up to the body brace.
    while i < len(cur.toks) and not cur.is_op(i, "{"):
        if cur.is_op(i, "(") or cur.is_op(i, "["):
            i = cur.match[i] + 1
            continue
        if cur.is_op(i, ";"):  # degenerate declaration, no body
            return i + 1
        i += 1
    if i >= len(cur.toks):
        return i
    body_open, body_close = i, cur.match[i]
    j = body_open + 1
    if keyword == "enum":
        j = _skip_enum_constants(cur, j, body_close)
    while j < body_close:
        j = _scan_member(cur, j, body_close, type_name, out)
    return body_close + 1


def _skip_enum_constants(cur: _TokenCursor, i: int, limit: int) -> int:
    # Constants run until a ';' at body level (or the closing brace).  Constant
    # bodies are anonymous-class-like and are not scanned for methods.
    while i < limit:
        if cur.is_op(i, ";"):
            return i + 1
        if cur.is_op(i, "(") or cur.is_op(i, "{"):
            i = cur.match[i] + 1
            continue
        i += 1
    return limit


def _scan_member(cur: _TokenCursor, i: int, limit: int, type_name: str,
                 out: list[RawMethod]) -> int:
    start = i
    i = cur.skip_annotations(i)
    while cur.kind(i) == "kw" and cur.text(i) in MODIFIERS:
        i = cur.skip_annotations(i + 1)
    if cur.kind(i) == "id" and cur.text(i) in ("sealed",):
        i += 1
    if cur.is_op(i, "{"):  # instance or static initializer block
        return cur.match[i] + 1
    if cur.kind(i) == "kw" and cur.text(i) in _TYPE_KEYWORDS:
        return _scan_type_decl(cur, i, out)
    if cur.kind(i) == "id" and cur.text(i) == "record" and cur.kind(i + 1) == "id":
        return _scan_type_decl(cur, i, out)
    i = cur.skip_generics(i)  # method type parameters

    header_start = cur.toks[start].start if start < len(cur.toks) else 0
    # Constructor: bare type name followed by '('.
    if cur.kind(i) == "id" and cur.text(i) == type_name and cur.is_op(i + 1, "("):
        return _scan_executable(cur, i, i + 1, type_name, header_start, out, limit)
    parsed = cur.parse_type(i)
    if parsed is not None:
        _, j = parsed
        if cur.kind(j) == "id" and cur.is_op(j + 1, "("):
            return _scan_executable(cur, j, j + 1, cur.text(j), header_start, out, limit)
    return _skip_member(cur, i, limit)


def _skip_member(cur: _TokenCursor, i: int, limit: int) -> int:
    # Field or anything unrecognized: consume through the terminating ';'
    # (balancing delimiters so initializers with braces survive).
    while i < limit:
        if cur.is_op(i, ";"):
            return i + 1
        if cur.text(i) in _OPEN and cur.kind(i) == "op":
            i = cur.match[i] + 1
            continue
        i += 1
    return limit


def _scan_executable(cur: _TokenCursor, name_idx: int, paren_idx: int,
                     name: str, header_start: int, out: list[RawMethod],
                     limit: int) -> int:
    params, _ = _parse_params(cur, paren_idx)
    i = cur.match[paren_idx] + 1
    while cur.is_op(i, "[") and cur.is_op(i + 1, "]"):  # archaic int m()[] form
        i += 2
    if cur.kind(i) == "kw" and cur.text(i) == "throws":
        i += 1
        while i < limit and not cur.is_op(i, "{") and not cur.is_op(i, ";"):
            i += 1
    if cur.is_op(i, ";"):  # abstract/native: no body, not a method for us
        return i + 1
    if cur.kind(i) == "kw" and cur.text(i) == "default":  # annotation member
        return _skip_member(cur, i, limit)
    if not cur.is_op(i, "{"):
        return _skip_member(cur, i, limit)
    body_open, body_close = i, cur.match[i]
    sig = "{}({})".format(name, ",".join(p.type_info.raw for p in params))
    out.append(
        RawMethod(
            name=name,
            signature=sig,
            params=params,
            header_start=header_start,
            body_open=cur.toks[body_open].start,
            body_close=cur.toks[body_close].end,
            body_toks=(body_open, body_close),
        )
    )
    return body_close + 1


def _parse_params(cur: _TokenCursor, paren_idx: int) -> tuple[list[Param], int]:
    params: list[Param] = []
    close = cur.match[paren_idx]
    i = paren_idx + 1
    while i < close:
        i = cur.skip_annotations(i)
        while cur.kind(i) == "kw" and cur.text(i) == "final":
            i += 1
        parsed = cur.parse_type(i)
        if parsed is None:
            break
        tinfo, i = parsed
        if cur.is_op(i, "..."):
            tinfo = TypeInfo(tinfo.raw + "...", tinfo.base, tinfo.dims + 1)
            i += 1
        if cur.kind(i) == "id" or (cur.kind(i) == "kw" and cur.text(i) == "this"):
            pname = cur.text(i)
            i += 1
            while cur.is_op(i, "[") and cur.is_op(i + 1, "]"):
                tinfo = TypeInfo(tinfo.raw + "[]", tinfo.base, tinfo.dims + 1)
                i += 2
            params.append(Param(pname, tinfo))
        if cur.is_op(i, ","):
            i += 1
        else:
            break
    return params, close


# ---------------------------------------------------------------------------
# Expression AST
# ---------------------------------------------------------------------------

@dataclass
class Expr:
    pass


@dataclass
class Lit(Expr):
    category: str  # int | float | str | char | bool | null
    text: str


@dataclass
class Name(Expr):
    ident: str


@dataclass
class This(Expr):
    pass


@dataclass
class Super(Expr):
    pass


@dataclass
class FieldAccess(Expr):
    receiver: Expr
    name: str


@dataclass
class ArrayAccess(Expr):
    array: Expr
    index: Expr


@dataclass
class Call(Expr):
    receiver: Expr | None
    name: str
    args: list[Expr]


@dataclass
class New(Expr):
    type_info: TypeInfo
    args: list[Expr]
    dims: list[Expr] = field(default_factory=list)
    has_body: bool = False  # anonymous class body: opaque, not expanded


@dataclass
class Unary(Expr):
    op: str
    operand: Expr
    prefix: bool = True


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass
class InstanceOf(Expr):
    value: Expr
    type_info: TypeInfo


@dataclass
class Ternary(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass
class Assign(Expr):
    target: Expr
    op: str  # '=' or a compound operator like '+='
    value: Expr


@dataclass
class Cast(Expr):
    type_info: TypeInfo
    value: Expr


@dataclass
class Lambda(Expr):
    pass  # opaque: body is not modeled


@dataclass
class MethodRef(Expr):
    receiver: Expr | None


@dataclass
class ArrayInit(Expr):
    items: list[Expr]


@dataclass
class OpaqueExpr(Expr):
    pass


# ---------------------------------------------------------------------------
# Statement AST
# ---------------------------------------------------------------------------

@dataclass
class Stmt:
    span: tuple[int, int] = (0, 0)


@dataclass
class Declarator:
    name: str
    init: Expr | None


@dataclass
class VarDeclStmt(Stmt):
    type_info: TypeInfo = None  # type: ignore[assignment]
    declarators: list[Declarator] = field(default_factory=list)


@dataclass
class ExprStmt(Stmt):
    expr: Expr = None  # type: ignore[assignment]


@dataclass
class BlockStmt(Stmt):
    body: list[Stmt] = field(default_factory=list)


@dataclass
class IfStmt(Stmt):
    cond: Expr = None  # type: ignore[assignment]
    then: list[Stmt] = field(default_factory=list)
    orelse: list[Stmt] | None = None


@dataclass
class WhileStmt(Stmt):
    cond: Expr | None = None
    body: list[Stmt] = field(default_factory=list)


@dataclass
class DoWhileStmt(Stmt):
    cond: Expr | None = None
    body: list[Stmt] = field(default_factory=list)


@dataclass
class ForStmt(Stmt):
    init: list[Stmt] = field(default_factory=list)
    cond: Expr | None = None
    update: list[Stmt] = field(default_factory=list)
    body: list[Stmt] = field(default_factory=list)


@dataclass
class ForEachStmt(Stmt):
    type_info: TypeInfo = None  # type: ignore[assignment]
    var_name: str = ""
    iterable: Expr = None  # type: ignore[assignment]
    body: list[Stmt] = field(default_factory=list)


@dataclass
class SwitchGroup:
    stmts: list[Stmt]
    arrow: bool = False


@dataclass
class SwitchStmt(Stmt):
    selector: Expr = None  # type: ignore[assignment]
    groups: list[SwitchGroup] = field(default_factory=list)
    has_default: bool = False


@dataclass
class CatchClause:
    var_name: str
    type_info: TypeInfo
    body: list[Stmt]
    span: tuple[int, int] = (0, 0)


@dataclass
class TryStmt(Stmt):
    resources: list[VarDeclStmt] = field(default_factory=list)
    body: list[Stmt] = field(default_factory=list)
    catches: list[CatchClause] = field(default_factory=list)
    final_body: list[Stmt] | None = None
    final_span: tuple[int, int] = (0, 0)


@dataclass
class ThrowStmt(Stmt):
    expr: Expr = None  # type: ignore[assignment]


@dataclass
class ReturnStmt(Stmt):
    expr: Expr | None = None


@dataclass
class BreakStmt(Stmt):
    pass


@dataclass
class ContinueStmt(Stmt):
    pass


@dataclass
class SyncStmt(Stmt):
    lock: Expr = None  # type: ignore[assignment]
    body: list[Stmt] = field(default_factory=list)


@dataclass
class OtherStmt(Stmt):
    pass


# ---------------------------------------------------------------------------
# Statement parser
# ---------------------------------------------------------------------------

_ASSIGN_OPS = frozenset(
    ["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="]
)

# precedence levels, low to high
_BINARY_LEVELS = [
    ["||"],
    ["&&"],
    ["|"],
    ["^"],
    ["&"],
    ["==", "!="],
    ["<", ">", "<=", ">=", "instanceof"],
    ["<<", ">>", ">>>"],
    ["+", "-"],
    ["*", "/", "%"],
]

_PRIMARY_START_KINDS = frozenset(["id", "int", "float", "str", "char", "bool", "null"])


class StatementParser:
    """Parses the token range of one method body into statement trees."""

    def __init__(self, toks: list[Token], match: dict[int, int]):
        self.toks = toks
        self.match = match
        self.cur = _TokenCursor(toks, match)
        self.i = 0
        self.limit = 0

    # -- helpers ------------------------------------------------------------

    def _tok(self, off: int = 0) -> Token | None:
        j = self.i + off
        return self.toks[j] if j < self.limit else None

    def _text(self, off: int = 0) -> str:
        t = self._tok(off)
        return t.text if t else ""

    def _kind(self, off: int = 0) -> str:
        t = self._tok(off)
        return t.kind if t else "eof"

    def _at_op(self, text: str, off: int = 0) -> bool:
        t = self._tok(off)
        return t is not None and t.kind == "op" and t.text == text

    def _at_kw(self, text: str, off: int = 0) -> bool:
        t = self._tok(off)
        return t is not None and t.kind == "kw" and t.text == text

    def _expect_op(self, text: str) -> Token:
        t = self._tok()
        if t is None or t.kind != "op" or t.text != text:
            raise _Backtrack(f"expected {text!r}")
        self.i += 1
        return t

    def _span(self, start_idx: int, end_idx: int) -> tuple[int, int]:
        return (self.toks[start_idx].start, self.toks[end_idx - 1].end)

    # -- entry points ---------------------------------------------------------

    def parse_body(self, open_idx: int, close_idx: int) -> list[Stmt]:
        self.i = open_idx + 1
        self.limit = close_idx
        return self._parse_stmt_seq()

    def _parse_stmt_seq(self) -> list[Stmt]:
        out: list[Stmt] = []
        while self.i < self.limit:
            if self._at_op("}"):
                break
            s = self._parse_statement()
            if s is not None:
                out.append(s)
        return out

    def _parse_braced_block(self) -> list[Stmt]:
        open_idx = self.i
        self._expect_op("{")
        close = self.match[open_idx]
        saved_limit = self.limit
        self.limit = close
        body = self._parse_stmt_seq()
        self.limit = saved_limit
        self.i = close + 1
        return body

    def _parse_stmt_or_block(self) -> list[Stmt]:
        if self._at_op("{"):
            return self._parse_braced_block()
        s = self._parse_statement()
        return [s] if s is not None else []

    # -- statement dispatch ---------------------------------------------------

    def _parse_statement(self) -> Stmt | None:
        start = self.i
        if self._at_op(";"):
            self.i += 1
            return None
        if self._at_op("{"):
            blk = BlockStmt(body=self._parse_braced_block())
            blk.span = self._span(start, self.i)
            return blk
        t = self._tok()
        assert t is not None
        if t.kind == "kw":
            handler = {
                "if": self._parse_if,
                "while": self._parse_while,
                "do": self._parse_do,
                "for": self._parse_for,
                "switch": self._parse_switch,
                "try": self._parse_try,
                "synchronized": self._parse_sync,
                "throw": self._parse_throw,
                "return": self._parse_return,
                "break": self._parse_break,
                "continue": self._parse_continue,
            }.get(t.text)
            if handler is not None:
                try:
                    return handler()
                except _Backtrack:
                    self.i = start
                    return self._parse_other()
            if t.text == "final" or t.text in PRIMITIVES:
                try:
                    return self._parse_vardecl()
                except _Backtrack:
                    self.i = start
                    return self._parse_other()
            if t.text in ("this", "super", "new"):
                try:
                    return self._parse_expr_statement()
                except _Backtrack:
                    self.i = start
                    return self._parse_other()
            # assert, yield, nested class declarations, ... -> opaque
            return self._parse_other()
        if t.kind == "op" and t.text == "@":  # annotated local declaration
            try:
                return self._parse_vardecl()
            except _Backtrack:
                self.i = start
                return self._parse_other()
        if t.kind == "id":
            if self._at_op(":", 1):  # label prefix: unwrap
                self.i += 2
                return self._parse_statement()
            try:
                return self._parse_vardecl()
            except _Backtrack:
                self.i = start
            try:
                return self._parse_expr_statement()
            except _Backtrack:
                self.i = start
                return self._parse_other()
        try:
            return self._parse_expr_statement()
        except _Backtrack:
            self.i = start
            return self._parse_other()

    def _parse_other(self) -> Stmt:
        """Consume one unrecognized statement: through ';' at depth 0, or a
        single balanced brace block.  Never crosses the enclosing '}'."""
        start = self.i
        while self.i < self.limit:
            if self._at_op("}"):
                break
            if self._at_op(";"):
                self.i += 1
                break
            tok = self._tok()
            assert tok is not None
            if tok.kind == "op" and tok.text in _OPEN:
                close = self.match[self.i]
                self.i = close + 1
                if tok.text == "{" and not self._at_op(";"):
                    break
                continue
            self.i += 1
        end = max(self.i, start + 1)
        s = OtherStmt()
        s.span = self._span(start, min(end, self.limit) or end)
        return s

    # -- declarations and expressions ------------------------------------------

    def _parse_vardecl(self) -> VarDeclStmt:
        start = self.i
        i = self.cur.skip_annotations(self.i)
        while i < self.limit and self.toks[i].kind == "kw" and self.toks[i].text == "final":
            i = self.cur.skip_annotations(i + 1)
        parsed = self.cur.parse_type(i)
        if parsed is None:
            raise _Backtrack("no type")
        tinfo, i = parsed
        if i >= self.limit or self.toks[i].kind != "id":
            raise _Backtrack("no declarator name")
        self.i = i
        declarators: list[Declarator] = []
        while True:
            if self._kind() != "id":
                raise _Backtrack("declarator expected")
            name = self._text()
            self.i += 1
            while self._at_op("[") and self._at_op("]", 1):
                self.i += 2
            init: Expr | None = None
            if self._at_op("="):
                self.i += 1
                init = self._parse_var_init()
            declarators.append(Declarator(name, init))
            if self._at_op(","):
                self.i += 1
                continue
            break
        self._expect_op(";")
        s = VarDeclStmt(type_info=tinfo, declarators=declarators)
        s.span = self._span(start, self.i)
        return s

    def _parse_var_init(self) -> Expr:
        if self._at_op("{"):
            return self._parse_array_init()
        return self._parse_expression()

    def _parse_array_init(self) -> Expr:
        open_idx = self.i
        self._expect_op("{")
        close = self.match[open_idx]
        items: list[Expr] = []
        while self.i < close:
            if self._at_op(","):
                self.i += 1
                continue
            if self._at_op("{"):
                items.append(self._parse_array_init())
                continue
            saved_limit = self.limit
            self.limit = close
            try:
                items.append(self._parse_expression())
            except _Backtrack:
                self.limit = saved_limit
                self.i = close
                break
            finally:
                if self.limit == close:
                    self.limit = saved_limit
            if not (self._at_op(",") or self.i >= close):
                self.i = close
                break
        self.i = close + 1
        return ArrayInit(items)

    def _parse_expr_statement(self) -> Stmt:
        start = self.i
        expr = self._parse_expression()
        self._expect_op(";")
        s = ExprStmt(expr=expr)
        s.span = self._span(start, self.i)
        return s

    # -- control statements -----------------------------------------------------

    def _parse_paren_expr(self) -> tuple[Expr, int]:
        """Parse '(' expr ')'; returns the expression and the index just past ')'."""
        open_idx = self.i
        self._expect_op("(")
        close = self.match[open_idx]
        saved_limit = self.limit
        self.limit = close
        try:
            expr = self._parse_expression()
        except _Backtrack:
            expr = OpaqueExpr()
        finally:
            self.limit = saved_limit
        self.i = close + 1
        return expr, close + 1

    def _parse_if(self) -> Stmt:
        start = self.i
        self.i += 1  # 'if'
        cond, after = self._parse_paren_expr()
        header_span = self._span(start, after)
        then = self._parse_stmt_or_block()
        orelse: list[Stmt] | None = None
        if self._at_kw("else"):
            self.i += 1
            orelse = self._parse_stmt_or_block()
        s = IfStmt(cond=cond, then=then, orelse=orelse)
        s.span = header_span
        return s

    def _parse_while(self) -> Stmt:
        start = self.i
        self.i += 1
        cond, after = self._parse_paren_expr()
        header_span = self._span(start, after)
        body = self._parse_stmt_or_block()
        s = WhileStmt(cond=cond, body=body)
        s.span = header_span
        return s

    def _parse_do(self) -> Stmt:
        self.i += 1  # 'do'
        body = self._parse_stmt_or_block()
        if not self._at_kw("while"):
            raise _Backtrack("do without while")
        start = self.i
        self.i += 1
        cond, after = self._parse_paren_expr()
        header_span = self._span(start, after)
        self._expect_op(";")
        s = DoWhileStmt(cond=cond, body=body)
        s.span = header_span
        return s

    def _parse_for(self) -> Stmt:
        start = self.i
        self.i += 1  # 'for'
        open_idx = self.i
        self._expect_op("(")
        close = self.match[open_idx]
        header_span = (self.toks[start].start, self.toks[close].end)
        # for-each: Type name : iterable
        colon = self._find_top_level(open_idx + 1, close, ":")
        semi1 = self._find_top_level(open_idx + 1, close, ";")
        if colon is not None and semi1 is None:
            saved_limit = self.limit
            self.limit = colon
            i = self.cur.skip_annotations(self.i)
            while i < colon and self.toks[i].kind == "kw" and self.toks[i].text == "final":
                i = self.cur.skip_annotations(i + 1)
            parsed = self.cur.parse_type(i)
            if parsed is None:
                self.limit = saved_limit
                raise _Backtrack("foreach without type")
            tinfo, i = parsed
            if i >= colon or self.toks[i].kind != "id":
                self.limit = saved_limit
                raise _Backtrack("foreach without variable")
            var_name = self.toks[i].text
            self.limit = close
            self.i = colon + 1
            try:
                iterable = self._parse_expression()
            except _Backtrack:
                iterable = OpaqueExpr()
            finally:
                self.limit = saved_limit
            self.i = close + 1
            body = self._parse_stmt_or_block()
            s = ForEachStmt(type_info=tinfo, var_name=var_name, iterable=iterable, body=body)
            s.span = header_span
            return s
        # classic for
        if semi1 is None:
            raise _Backtrack("malformed for header")
        semi2 = self._find_top_level(semi1 + 1, close, ";")
        if semi2 is None:
            raise _Backtrack("malformed for header")
        saved_limit = self.limit
        init: list[Stmt] = []
        self.limit = semi1 + 1  # include ';' so decl/expr statements can consume it
        while self.i < semi1:
            st = self._parse_statement()
            if st is not None:
                init.append(st)
            if self.i <= semi1 and self._at_op(";"):
                self.i += 1
        self.limit = semi2
        self.i = semi1 + 1
        cond: Expr | None = None
        if self.i < semi2:
            try:
                cond = self._parse_expression()
            except _Backtrack:
                cond = OpaqueExpr()
        self.limit = close
        self.i = semi2 + 1
        update: list[Stmt] = []
        while self.i < close:
            if self._at_op(","):
                self.i += 1
                continue
            upd_start = self.i
            try:
                expr = self._parse_expression()
            except _Backtrack:
                self.i = close
                break
            us = ExprStmt(expr=expr)
            us.span = self._span(upd_start, max(self.i, upd_start + 1))
            update.append(us)
        self.limit = saved_limit
        self.i = close + 1
        body = self._parse_stmt_or_block()
        s = ForStmt(init=init, cond=cond, update=update, body=body)
        s.span = header_span
        return s

    def _find_top_level(self, lo: int, hi: int, text: str) -> int | None:
        i = lo
        while i < hi:
            t = self.toks[i]
            if t.kind == "op":
                if t.text in _OPEN:
                    i = self.match[i] + 1
                    continue
                if t.text == text:
                    return i
                if t.text == "?":  # skip ternary so its ':' is not a for-each colon
                    depth = 1
                    i += 1
                    while i < hi and depth:
                        if self.toks[i].kind == "op":
                            if self.toks[i].text in _OPEN:
                                i = self.match[i] + 1
                                continue
                            if self.toks[i].text == "?":
                                depth += 1
                            elif self.toks[i].text == ":":
                                depth -= 1
                        i += 1
                    continue
            i += 1
        return None

    def _parse_switch(self) -> Stmt:
        start = self.i
        self.i += 1  # 'switch'
        selector, after = self._parse_paren_expr()
        header_span = self._span(start, after)
        open_idx = self.i
        self._expect_op("{")
        close = self.match[open_idx]
        groups: list[SwitchGroup] = []
        has_default = False
        self.i = open_idx + 1
        saved_limit = self.limit
        self.limit = close
        current: SwitchGroup | None = None
        while self.i < close:
            if self._at_kw("case") or self._at_kw("default"):
                if self._at_kw("default"):
                    has_default = True
                    self.i += 1
                else:
                    self.i += 1
                    # skip label expression(s) to ':' or '->'
                    while self.i < close and not (self._at_op(":") or self._at_op("->")):
                        if self._text() in _OPEN and self._kind() == "op":
                            self.i = self.match[self.i] + 1
                        else:
                            self.i += 1
                arrow = self._at_op("->")
                if self._at_op(":") or self._at_op("->"):
                    self.i += 1
                # stacked labels (case 2: case 3:) share a group; a label after
                # statements starts the next group
                if current is None or arrow or current.arrow or current.stmts:
                    current = SwitchGroup(stmts=[], arrow=arrow)
                    groups.append(current)
                continue
            if current is None:  # tolerate junk before first label
                current = SwitchGroup(stmts=[])
                groups.append(current)
            st = self._parse_statement()
            if st is not None:
                current.stmts.append(st)
        self.limit = saved_limit
        self.i = close + 1
        s = SwitchStmt(selector=selector, groups=groups, has_default=has_default)
        s.span = header_span
        return s

    def _parse_try(self) -> Stmt:
        start = self.i
        self.i += 1  # 'try'
        resources: list[VarDeclStmt] = []
        header_end = self.i
        if self._at_op("("):
            open_idx = self.i
            close = self.match[open_idx]
            saved_limit = self.limit
            self.limit = close + 1
            self.i = open_idx + 1
            while self.i < close:
                if self._at_op(";"):
                    self.i += 1
                    continue
                res_start = self.i
                try:
                    # a resource is 'Type name = expr' without the trailing ';'
                    decl = self._parse_resource(close)
                    resources.append(decl)
                except _Backtrack:
                    self.i = close
                if self.i == res_start:
                    break
            self.limit = saved_limit
            self.i = close + 1
            header_end = close + 1
        header_span = self._span(start, max(header_end, start + 1))
        body = self._parse_braced_block()
        catches: list[CatchClause] = []
        final_body: list[Stmt] | None = None
        final_span = (0, 0)
        while self._at_kw("catch"):
            cstart = self.i
            self.i += 1
            open_idx = self.i
            self._expect_op("(")
            close = self.match[open_idx]
            i = self.cur.skip_annotations(open_idx + 1)
            while i < close and self.toks[i].kind == "kw" and self.toks[i].text == "final":
                i = self.cur.skip_annotations(i + 1)
            tinfo: TypeInfo | None = None
            parsed = self.cur.parse_type(i)
            if parsed is not None:
                tinfo, i = parsed
                while i < close and self.toks[i].kind == "op" and self.toks[i].text == "|":
                    alt = self.cur.parse_type(i + 1)
                    if alt is None:
                        break
                    _, i = alt
            var_name = self.toks[i].text if i < close and self.toks[i].kind == "id" else ""
            cheader = (self.toks[cstart].start, self.toks[close].end)
            self.i = close + 1
            cbody = self._parse_braced_block()
            catches.append(
                CatchClause(
                    var_name=var_name,
                    type_info=tinfo or TypeInfo("Throwable", "Throwable", 0),
                    body=cbody,
                    span=cheader,
                )
            )
        if self._at_kw("finally"):
            fstart = self.i
            final_span = (self.toks[fstart].start, self.toks[fstart].end)
            self.i += 1
            final_body = self._parse_braced_block()
        s = TryStmt(resources=resources, body=body, catches=catches,
                    final_body=final_body, final_span=final_span)
        s.span = header_span
        return s

    def _parse_resource(self, close: int) -> VarDeclStmt:
        start = self.i
        i = self.cur.skip_annotations(self.i)
        while i < close and self.toks[i].kind == "kw" and self.toks[i].text == "final":
            i = self.cur.skip_annotations(i + 1)
        parsed = self.cur.parse_type(i)
        if parsed is None:
            raise _Backtrack("no resource type")
        tinfo, i = parsed
        if i >= close or self.toks[i].kind != "id":
            raise _Backtrack("no resource name")
        name = self.toks[i].text
        self.i = i + 1
        init: Expr | None = None
        if self._at_op("="):
            self.i += 1
            saved = self.limit
            self.limit = close
            semi = self._find_top_level(self.i, close, ";")
            if semi is not None:
                self.limit = semi
            try:
                init = self._parse_expression()
            except _Backtrack:
                init = OpaqueExpr()
                self.i = semi if semi is not None else close
            finally:
                self.limit = saved
        s = VarDeclStmt(type_info=tinfo, declarators=[Declarator(name, init)])
        end_idx = min(self.i, close)
        s.span = self._span(start, max(end_idx, start + 1))
        return s

    def _parse_sync(self) -> Stmt:
        start = self.i
        self.i += 1  # 'synchronized'
        lock, after = self._parse_paren_expr()
        header_span = self._span(start, after)
        body = self._parse_braced_block()
        s = SyncStmt(lock=lock, body=body)
        s.span = header_span
        return s

    def _parse_throw(self) -> Stmt:
        start = self.i
        self.i += 1
        expr = self._parse_expression()
        self._expect_op(";")
        s = ThrowStmt(expr=expr)
        s.span = self._span(start, self.i)
        return s

    def _parse_return(self) -> Stmt:
        start = self.i
        self.i += 1
        expr: Expr | None = None
        if not self._at_op(";"):
            expr = self._parse_expression()
        self._expect_op(";")
        s = ReturnStmt(expr=expr)
        s.span = self._span(start, self.i)
        return s

    def _parse_break(self) -> Stmt:
        start = self.i
        self.i += 1
        if self._kind() == "id":  # label: jump treated as unlabeled
            self.i += 1
        self._expect_op(";")
        s = BreakStmt()
        s.span = self._span(start, self.i)
        return s

    def _parse_continue(self) -> Stmt:
        start = self.i
        self.i += 1
        if self._kind() == "id":
            self.i += 1
        self._expect_op(";")
        s = ContinueStmt()
        s.span = self._span(start, self.i)
        return s

    # -- expressions -----------------------------------------------------------

    def _parse_expression(self) -> Expr:
        return self._parse_assignment()

    def _parse_assignment(self) -> Expr:
        lam = self._try_lambda()
        if lam is not None:
            return lam
        left = self._parse_ternary()
        t = self._tok()
        if t is not None and t.kind == "op" and t.text in _ASSIGN_OPS:
            self.i += 1
            value = self._parse_assignment()
            return Assign(target=left, op=t.text, value=value)
        return left

    def _try_lambda(self) -> Expr | None:
        if self._kind() == "id" and self._at_op("->", 1):
            self.i += 2
            self._consume_lambda_body()
            return Lambda()
        if self._at_op("("):
            close = self.match.get(self.i)
            if close is not None and close + 1 < len(self.toks):
                nxt = self.toks[close + 1]
                if nxt.kind == "op" and nxt.text == "->" and close + 1 < self.limit:
                    self.i = close + 2
                    self._consume_lambda_body()
                    return Lambda()
        return None

    def _consume_lambda_body(self) -> None:
        if self._at_op("{"):
            open_idx = self.i
            self.i = self.match[open_idx] + 1
        else:
            self._parse_assignment()  # value discarded: lambda bodies are opaque

    def _parse_ternary(self) -> Expr:
        cond = self._parse_binary(0)
        if self._at_op("?"):
            self.i += 1
            then = self._parse_assignment()
            self._expect_op(":")
            other = self._parse_assignment()
            return Ternary(cond=cond, then=then, other=other)
        return cond

    def _parse_binary(self, level: int) -> Expr:
        if level >= len(_BINARY_LEVELS):
            return self._parse_unary()
        ops = _BINARY_LEVELS[level]
        left = self._parse_binary(level + 1)
        while True:
            t = self._tok()
            if t is None:
                return left
            if t.kind == "kw" and t.text == "instanceof" and "instanceof" in ops:
                self.i += 1
                parsed = self.cur.parse_type(self.i)
                if parsed is None:
                    raise _Backtrack("instanceof without type")
                tinfo, j = parsed
                self.i = j
                if self._kind() == "id":  # pattern variable (Java 16)
                    self.i += 1
                left = InstanceOf(value=left, type_info=tinfo)
                continue
            if t.kind == "op" and t.text in ops and t.text != "instanceof":
                self.i += 1
                right = self._parse_binary(level + 1)
                left = Binary(op=t.text, left=left, right=right)
                continue
            return left

    def _parse_unary(self) -> Expr:
        t = self._tok()
        if t is None:
            raise _Backtrack("expression expected")
        if t.kind == "op" and t.text in ("+", "-", "!", "~", "++", "--"):
            self.i += 1
            operand = self._parse_unary()
            if t.text in ("+", "-") and isinstance(operand, Lit) and operand.category in ("int", "float"):
                return operand  # signed numeric literal folds into the literal
            return Unary(op=t.text, operand=operand, prefix=True)
        if t.kind == "op" and t.text == "(":
            cast = self._try_cast()
            if cast is not None:
                return cast
        return self._parse_postfix()

    def _try_cast(self) -> Expr | None:
        open_idx = self.i
        close = self.match.get(open_idx)
        if close is None or close >= self.limit:
            return None
        parsed = self.cur.parse_type(open_idx + 1)
        if parsed is None:
            return None
        tinfo, j = parsed
        if j != close:
            return None
        if close + 1 >= self.limit:
            return None
        nxt = self.toks[close + 1]
        looks_like_cast = (
            nxt.kind in _PRIMARY_START_KINDS
            or (nxt.kind == "kw" and nxt.text in ("this", "new", "super"))
            or (nxt.kind == "op" and nxt.text in ("(", "!", "~"))
        )
        plausible_type = (
            tinfo.base in PRIMITIVES
            or tinfo.dims > 0
            or "." in tinfo.raw
            or "<" in tinfo.raw
            or tinfo.base[:1].isupper()
        )
        if not (looks_like_cast and plausible_type):
            return None
        self.i = close + 1
        value = self._parse_unary()
        return Cast(type_info=tinfo, value=value)

    def _parse_postfix(self) -> Expr:
        expr = self._parse_primary()
        while True:
            if self._at_op("."):
                nxt = self._tok(1)
                if nxt is None:
                    raise _Backtrack("dangling '.'")
                if nxt.kind in ("id", "kw"):
                    name = nxt.text
                    if self._at_op("(", 2):
                        open_idx = self.i + 2
                        args = self._parse_args(open_idx)
                        expr = Call(receiver=expr, name=name, args=args)
                        continue
                    self.i += 2
                    if name == "class" or name == "this":
                        expr = OpaqueExpr()
                    else:
                        expr = FieldAccess(receiver=expr, name=name)
                    continue
                if nxt.kind == "op" and nxt.text == "<":  # explicit type args: give up
                    raise _Backtrack("explicit call type arguments")
                raise _Backtrack("unexpected token after '.'")
            if self._at_op("["):
                open_idx = self.i
                close = self.match[open_idx]
                saved = self.limit
                self.limit = close
                self.i = open_idx + 1
                try:
                    idx = self._parse_expression()
                except _Backtrack:
                    idx = OpaqueExpr()
                finally:
                    self.limit = saved
                self.i = close + 1
                expr = ArrayAccess(array=expr, index=idx)
                continue
            if self._at_op("::"):
                nxt = self._tok(1)
                self.i += 2
                if nxt is not None and nxt.kind in ("id", "kw"):
                    pass
                expr = MethodRef(receiver=expr)
                continue
            if self._at_op("++") or self._at_op("--"):
                op = self._text()
                self.i += 1
                expr = Unary(op=op, operand=expr, prefix=False)
                continue
            return expr

    def _parse_args(self, open_idx: int) -> list[Expr]:
        close = self.match[open_idx]
        args: list[Expr] = []
        saved = self.limit
        self.i = open_idx + 1
        self.limit = close
        while self.i < close:
            if self._at_op(","):
                self.i += 1
                continue
            try:
                args.append(self._parse_expression())
            except _Backtrack:
                args.append(OpaqueExpr())
                self.i = close
        self.limit = saved
        self.i = close + 1
        return args

    def _parse_primary(self) -> Expr:
        t = self._tok()
        if t is None:
            raise _Backtrack("expression expected")
        if t.kind in ("int", "float", "str", "char", "bool", "null"):
            self.i += 1
            return Lit(category=t.kind, text=t.text)
        if t.kind == "id":
            if self._at_op("(", 1):
                open_idx = self.i + 1
                name = t.text
                args = self._parse_args(open_idx)
                return Call(receiver=None, name=name, args=args)
            self.i += 1
            return Name(ident=t.text)
        if t.kind == "kw":
            if t.text == "this":
                if self._at_op("(", 1):  # this(...) constructor delegation
                    args = self._parse_args(self.i + 1)
                    return Call(receiver=None, name="this", args=args)
                self.i += 1
                return This()
            if t.text == "super":
                if self._at_op("(", 1):
                    args = self._parse_args(self.i + 1)
                    return Call(receiver=None, name="super", args=args)
                self.i += 1
                return Super()
            if t.text == "new":
                return self._parse_new()
            if t.text in PRIMITIVES:  # int.class, int[].class
                self.i += 1
                while self._at_op("[") and self._at_op("]", 1):
                    self.i += 2
                return OpaqueExpr()
            raise _Backtrack(f"unsupported keyword {t.text!r} in expression")
        if t.kind == "op" and t.text == "(":
            open_idx = self.i
            close = self.match[open_idx]
            saved = self.limit
            self.limit = close
            self.i = open_idx + 1
            try:
                inner = self._parse_expression()
            finally:
                self.limit = saved
            self.i = close + 1
            return inner
        raise _Backtrack(f"unexpected token {t.text!r}")

    def _parse_new(self) -> Expr:
        self.i += 1  # 'new'
        parsed = self.cur.parse_type(self.i)
        if parsed is None:
            raise _Backtrack("new without type")
        tinfo, j = parsed
        self.i = j
        if self._at_op("("):
            args = self._parse_args(self.i)
            has_body = False
            if self._at_op("{"):
                self.i = self.match[self.i] + 1  # anonymous class body: opaque
                has_body = True
            return New(type_info=tinfo, args=args, has_body=has_body)
        dims: list[Expr] = []
        while self._at_op("["):
            open_idx = self.i
            close = self.match[open_idx]
            if close > open_idx + 1:
                saved = self.limit
                self.limit = close
                self.i = open_idx + 1
                try:
                    dims.append(self._parse_expression())
                except _Backtrack:
                    dims.append(OpaqueExpr())
                finally:
                    self.limit = saved
            self.i = close + 1
        init_items: list[Expr] = []
        if self._at_op("{"):
            init = self._parse_array_init()
            assert isinstance(init, ArrayInit)
            init_items = init.items
        return New(type_info=tinfo, args=init_items, dims=dims)


def parse_method_body(toks: list[Token], match: dict[int, int],
                      body_toks: tuple[int, int]) -> list[Stmt]:
    parser = StatementParser(toks, match)
    return parser.parse_body(body_toks[0], body_toks[1])


def parse_snippet(source: str) -> list[Stmt]:
    """Parse a standalone statement sequence (testing convenience)."""
    wrapped = "{" + source + "}"
    toks = tokenize(wrapped)
    match = match_delimiters(toks)
    return parse_method_body(toks, match, (0, len(toks) - 1))
