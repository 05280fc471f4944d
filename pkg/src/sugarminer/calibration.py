"""Support-threshold calibration from desugared Kotlin sugar occurrences.

Four sugars Kotlin has and Java lacks are detected in their expanded Java
form; the least frequent one's per-method ratio becomes the mining threshold.
Detection runs on raw MethodCfgs because the getter/setter shape needs the
field-vs-parameter distinction that generalization erases.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .cfg import EdgePolarity, MethodCfg
from .vocab import LiteralTag, NodeKind, OpTag


class KotlinSugar(str, Enum):
    STRING_INTERPOLATION = "STRING_INTERPOLATION"
    ELVIS = "ELVIS"
    GETTER_SETTER = "GETTER_SETTER"
    NOT_NULL_ASSERTION = "NOT_NULL_ASSERTION"


class CalibrationError(Exception):
    pass


@dataclass
class SugarCount:
    method_count: int
    method_ratio: float


@dataclass
class CalibrationResult:
    total_methods: int
    counts: dict[KotlinSugar, SugarCount]
    threshold_ratio: float
    threshold_source: KotlinSugar
    warnings: list[str]

    def to_json(self) -> dict:
        return {
            "total_methods": self.total_methods,
            "sugars": {
                sugar.value: {
                    "method_count": c.method_count,
                    "method_ratio": c.method_ratio,
                }
                for sugar, c in self.counts.items()
            },
            "threshold_ratio": self.threshold_ratio,
            "threshold_source": self.threshold_source.value,
            "warnings": self.warnings,
        }


def _null_test_var(node) -> str | None:
    """The variable of a plain ``x == null`` / ``x != null`` / ``null == x``
    condition, else None."""
    if node.kind != NodeKind.IF:
        return None
    if node.operator_tags not in ([OpTag.EQ], [OpTag.NEQ]):
        return None
    if node.literal_kinds != [LiteralTag.NULL]:
        return None
    if len(node.uses) != 1:
        return None
    return next(iter(node.uses))


def _is_string_interpolation(node) -> bool:
    return (
        OpTag.PLUS in node.operator_tags
        and LiteralTag.STRING_LIT in node.literal_kinds
        and bool(node.uses)
    )


def _detect_string_interpolation(cfg: MethodCfg) -> bool:
    return any(_is_string_interpolation(n) for n in cfg.nodes)


def _detect_elvis(cfg: MethodCfg) -> bool:
    for node in cfg.nodes:
        var = _null_test_var(node)
        if var is None:
            continue
        true_t = cfg.branch_target(node.id, EdgePolarity.TRUE_BRANCH)
        false_t = cfg.branch_target(node.id, EdgePolarity.FALSE_BRANCH)
        # self-heal form: a branch assigns the checked variable itself
        for target in (true_t, false_t):
            if target is None:
                continue
            t = cfg.node(target)
            if t.kind == NodeKind.ASSIGN and var in t.defs:
                return True
        # common-target form: both branches assign the same variable and the
        # non-null side assigns from the checked variable
        if true_t is None or false_t is None:
            continue
        tn, fn = cfg.node(true_t), cfg.node(false_t)
        if tn.kind == NodeKind.ASSIGN and fn.kind == NodeKind.ASSIGN:
            if len(tn.defs) == 1 and tn.defs == fn.defs:
                non_null_side = fn if node.operator_tags == [OpTag.EQ] else tn
                if var in non_null_side.uses:
                    return True
    return False


def _single_statement(cfg: MethodCfg):
    """The lone statement node of an ENTRY->X->EXIT method, else None."""
    if len(cfg.nodes) != 3:
        return None
    for n in cfg.nodes:
        if n.kind not in (NodeKind.ENTRY, NodeKind.EXIT):
            return n
    return None


def _detect_getter_setter(cfg: MethodCfg) -> bool:
    node = _single_statement(cfg)
    if node is None:
        return False
    params = cfg.param_names()
    if node.kind == NodeKind.RETURN:
        # getter: returns a bare field ('this' marks explicit-receiver access)
        if node.literal_kinds or node.operator_tags or len(node.uses) != 1:
            return False
        used = next(iter(node.uses))
        return used == "this" or used not in params
    if node.kind == NodeKind.ASSIGN:
        # setter: field := parameter
        if not (node.uses & params):
            return False
        if node.field_target or (not node.defs and "this" in node.uses):
            return True
        if len(node.defs) == 1:
            target = next(iter(node.defs))
            return target not in params
    return False


def _detect_not_null_assertion(cfg: MethodCfg) -> bool:
    for node in cfg.nodes:
        var = _null_test_var(node)
        if var is None or node.operator_tags != [OpTag.EQ]:
            continue
        true_t = cfg.branch_target(node.id, EdgePolarity.TRUE_BRANCH)
        if true_t is not None and cfg.node(true_t).kind == NodeKind.THROW:
            return True
    return False


_DETECTORS = {
    KotlinSugar.STRING_INTERPOLATION: _detect_string_interpolation,
    KotlinSugar.ELVIS: _detect_elvis,
    KotlinSugar.GETTER_SETTER: _detect_getter_setter,
    KotlinSugar.NOT_NULL_ASSERTION: _detect_not_null_assertion,
}


def detect_kotlin_sugar(cfg: MethodCfg, sugar: KotlinSugar) -> bool:
    """True iff the method contains at least one desugared instance."""
    return bool(_DETECTORS[sugar](cfg))


def calibrate(db: list[MethodCfg]) -> CalibrationResult:
    """Per-sugar method counts and the min-ratio threshold.

    A sugar with zero occurrences is excluded from the minimum (with a
    warning); all four at zero is an error telling the user to pass an
    explicit threshold.
    """
    if not db:
        raise CalibrationError("empty corpus: nothing to calibrate")
    total = len(db)
    counts: dict[KotlinSugar, SugarCount] = {}
    for sugar in KotlinSugar:
        n = sum(1 for cfg in db if detect_kotlin_sugar(cfg, sugar))
        counts[sugar] = SugarCount(method_count=n, method_ratio=n / total)
    warnings = [
        f"{sugar.value}: zero occurrences, excluded from threshold"
        for sugar, c in counts.items()
        if c.method_count == 0
    ]
    nonzero = {s: c for s, c in counts.items() if c.method_count > 0}
    if not nonzero:
        raise CalibrationError(
            "no desugared Kotlin sugar found in the corpus; "
            "pass --min-support explicitly"
        )
    source = min(nonzero, key=lambda s: (nonzero[s].method_ratio, s.value))
    return CalibrationResult(
        total_methods=total,
        counts=counts,
        threshold_ratio=nonzero[source].method_ratio,
        threshold_source=source,
        warnings=warnings,
    )
