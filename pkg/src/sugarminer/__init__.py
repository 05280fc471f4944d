"""sugarminer: mine frequent control-flow idioms from Java corpora."""

from .calibration import CalibrationResult, KotlinSugar, calibrate, detect_kotlin_sugar
from .catalog import CatalogIdiom, CensusRow, census, detect_idiom
from .cfg import (
    CfgEdge,
    CfgNode,
    EdgePolarity,
    MethodCfg,
    MethodRef,
    build_cfg_from_source,
    defs_uses,
    validate_cfg,
)
from .corpus import IngestResult, ingest_corpus, iter_method_sources
from .generalize import (
    DataEdgeModifier,
    GeneralizedCfg,
    GeneralLabel,
    annotate_data_edges,
    baseline_label,
    generalize,
)
from .mining import (
    CanonicalForm,
    MiningGraph,
    PatternGraph,
    PatternStats,
    brute_force_mine,
    canonical_form,
    decode_canonical,
    find_embeddings,
    mine,
)
from .triage import (
    FilterVerdict,
    LabelRecord,
    LabelStore,
    SizeMetrics,
    apply_rules,
    compute_metrics,
    should_continue,
)
from .vocab import LiteralTag, NodeKind, OpTag, TypeTag

__version__ = "0.1.0"

__all__ = [
    "CalibrationResult", "KotlinSugar", "calibrate", "detect_kotlin_sugar",
    "CatalogIdiom", "CensusRow", "census", "detect_idiom",
    "CfgEdge", "CfgNode", "EdgePolarity", "MethodCfg", "MethodRef",
    "build_cfg_from_source", "defs_uses", "validate_cfg",
    "IngestResult", "ingest_corpus", "iter_method_sources",
    "DataEdgeModifier", "GeneralizedCfg", "GeneralLabel",
    "annotate_data_edges", "baseline_label", "generalize",
    "CanonicalForm", "MiningGraph", "PatternGraph", "PatternStats",
    "brute_force_mine", "canonical_form", "decode_canonical",
    "find_embeddings", "mine",
    "FilterVerdict", "LabelRecord", "LabelStore", "SizeMetrics",
    "apply_rules", "compute_metrics", "should_continue",
    "LiteralTag", "NodeKind", "OpTag", "TypeTag",
    "__version__",
]
