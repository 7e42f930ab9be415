"""Hiragana past-tense inflection workbench.

Generates gold past-tense data from executable conjugation rules, trains a
symbolic suffix-rule baseline (or ingests any model's predictions), and
classifies every residual error into orthography-aware failure modes.
"""

from .conjugate import (
    LexicalEntry,
    LexiconIssue,
    VerbType,
    classify_verb,
    conjugate_past,
    validate_lexicon,
)
from .dataset import (
    InflectionPair,
    Lexicon,
    SplitSet,
    TypeCounts,
    generate_pairs,
    ingest_lexicon,
    read_sigmorphon,
    split,
    stats,
    write_sigmorphon,
)
from .kana import (
    UNK,
    KanaFeatures,
    Mora,
    find_unknown_symbols,
    kana_features,
    segment_moras,
)
from .taxonomy import (
    AuditItem,
    AuditReport,
    ConsistencyReport,
    EditScript,
    ErrorLabel,
    align,
    classify_error,
    cross_run_consistency,
    error_distribution,
    evaluate,
    verb_class_distribution,
)
from .transducer import (
    Prediction,
    RuleSet,
    SuffixRule,
    ingest_predictions,
    learn_rules,
    predict,
    serialize_rules,
)

__version__ = "0.1.0"

__all__ = [
    "AuditItem",
    "AuditReport",
    "ConsistencyReport",
    "EditScript",
    "ErrorLabel",
    "InflectionPair",
    "KanaFeatures",
    "LexicalEntry",
    "Lexicon",
    "LexiconIssue",
    "Mora",
    "Prediction",
    "RuleSet",
    "SplitSet",
    "SuffixRule",
    "TypeCounts",
    "UNK",
    "VerbType",
    "align",
    "classify_error",
    "classify_verb",
    "conjugate_past",
    "cross_run_consistency",
    "error_distribution",
    "evaluate",
    "find_unknown_symbols",
    "generate_pairs",
    "ingest_lexicon",
    "ingest_predictions",
    "kana_features",
    "learn_rules",
    "predict",
    "read_sigmorphon",
    "segment_moras",
    "serialize_rules",
    "split",
    "stats",
    "validate_lexicon",
    "verb_class_distribution",
    "write_sigmorphon",
]
