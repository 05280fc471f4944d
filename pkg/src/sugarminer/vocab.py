"""Shared label vocabularies: node kinds, type tags, literal and operator categories.

Every token emitted into a generalized node label comes from one of the four
enumerations below.  The vocabularies are pairwise disjoint so a label string
can be parsed back into its components without a grammar.
"""

from __future__ import annotations

import enum


class NodeKind(str, enum.Enum):
    ENTRY = "ENTRY"
    EXIT = "EXIT"
    VARDECL = "VARDECL"
    ASSIGN = "ASSIGN"
    UNARY_UPDATE = "UNARY_UPDATE"
    METHOD_CALL = "METHOD_CALL"
    RETURN = "RETURN"
    IF = "IF"
    LOOP = "LOOP"
    SWITCH = "SWITCH"
    TRY = "TRY"
    CATCH = "CATCH"
    FINALLY = "FINALLY"
    THROW = "THROW"
    BREAK = "BREAK"
    CONTINUE = "CONTINUE"
    SYNC = "SYNC"
    OTHER = "OTHER"


class TypeTag(str, enum.Enum):
    INT = "INT"
    LONG = "LONG"
    SHORT = "SHORT"
    BYTE = "BYTE"
    CHAR = "CHAR"
    FLOAT = "FLOAT"
    DOUBLE = "DOUBLE"
    BOOLEAN = "BOOLEAN"
    STRING = "STRING"
    LIST = "LIST"
    MAP = "MAP"
    SET = "SET"
    OPTIONAL = "OPTIONAL"
    EXCEPTION_TYPE = "EXCEPTION_TYPE"
    OBJECT = "OBJECT"
    VOID = "VOID"
    UNKNOWN = "UNKNOWN"


class LiteralTag(str, enum.Enum):
    INT_LIT = "INT_LIT"
    FLOAT_LIT = "FLOAT_LIT"
    STRING_LIT = "STRING_LIT"
    CHAR_LIT = "CHAR_LIT"
    BOOL_LIT = "BOOL_LIT"
    NULL = "NULL"


class OpTag(str, enum.Enum):
    AND = "AND"                # &&
    OR = "OR"                  # ||
    NOT = "NOT"                # !
    INSTANCEOF = "INSTANCEOF"
    PLUS = "PLUS"
    MINUS = "MINUS"
    TIMES = "TIMES"
    DIV = "DIV"
    MOD = "MOD"
    EQ = "EQ"                  # ==
    NEQ = "NEQ"                # !=
    LT = "LT"
    LE = "LE"
    GT = "GT"
    GE = "GE"
    INC = "INC"                # ++
    DEC = "DEC"                # --
    NEG = "NEG"                # unary minus on a non-literal operand
    TERNARY = "TERNARY"
    BIT_AND = "BIT_AND"
    BIT_OR = "BIT_OR"
    BIT_XOR = "BIT_XOR"
    BIT_NOT = "BIT_NOT"
    SHL = "SHL"
    SHR = "SHR"
    USHR = "USHR"


# Argument-count buckets for call nodes; part of the label vocabulary.
ARG_BUCKETS = ("ARGS_0", "ARGS_1", "ARGS_2", "ARGS_3PLUS")


def arg_bucket(n: int) -> str:
    return ARG_BUCKETS[min(n, 3)]


_PRIMITIVE_TAGS = {
    "int": TypeTag.INT,
    "long": TypeTag.LONG,
    "short": TypeTag.SHORT,
    "byte": TypeTag.BYTE,
    "char": TypeTag.CHAR,
    "float": TypeTag.FLOAT,
    "double": TypeTag.DOUBLE,
    "boolean": TypeTag.BOOLEAN,
    "void": TypeTag.VOID,
}

_CORE_TAGS = {
    "String": TypeTag.STRING,
    "CharSequence": TypeTag.STRING,
    "StringBuilder": TypeTag.STRING,
    "StringBuffer": TypeTag.STRING,
    "List": TypeTag.LIST,
    "ArrayList": TypeTag.LIST,
    "LinkedList": TypeTag.LIST,
    "Map": TypeTag.MAP,
    "HashMap": TypeTag.MAP,
    "TreeMap": TypeTag.MAP,
    "LinkedHashMap": TypeTag.MAP,
    "Set": TypeTag.SET,
    "HashSet": TypeTag.SET,
    "TreeSet": TypeTag.SET,
    "LinkedHashSet": TypeTag.SET,
    "Optional": TypeTag.OPTIONAL,
    "Throwable": TypeTag.EXCEPTION_TYPE,
    "Exception": TypeTag.EXCEPTION_TYPE,
    "Error": TypeTag.EXCEPTION_TYPE,
}

_BOXED_TAGS = {
    "Integer": TypeTag.INT,
    "Long": TypeTag.LONG,
    "Short": TypeTag.SHORT,
    "Byte": TypeTag.BYTE,
    "Character": TypeTag.CHAR,
    "Float": TypeTag.FLOAT,
    "Double": TypeTag.DOUBLE,
    "Boolean": TypeTag.BOOLEAN,
}


def type_tag(base_name: str, dims: int = 0) -> TypeTag:
    """Map a source type's simple base name to its abstract tag.

    Total and deterministic: anything not in the whitelist is OBJECT.
    Array types collapse to OBJECT regardless of element type; the
    inferred-type marker ``var`` is UNKNOWN.
    """
    if dims > 0:
        return TypeTag.OBJECT
    if base_name == "var":
        return TypeTag.UNKNOWN
    tag = _PRIMITIVE_TAGS.get(base_name) or _CORE_TAGS.get(base_name) or _BOXED_TAGS.get(base_name)
    if tag is not None:
        return tag
    if base_name.endswith("Exception") or base_name.endswith("Error"):
        return TypeTag.EXCEPTION_TYPE
    return TypeTag.OBJECT


def label_vocabularies() -> dict[str, frozenset[str]]:
    """All token vocabularies that may appear in a generalized label."""
    return {
        "kind": frozenset(k.value for k in NodeKind),
        "type": frozenset(t.value for t in TypeTag),
        "literal": frozenset(t.value for t in LiteralTag),
        "op": frozenset(t.value for t in OpTag),
        "args": frozenset(ARG_BUCKETS),
    }
