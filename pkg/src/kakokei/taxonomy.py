"""Orthography-aware error labelling for past-tense predictions.

Gold and predicted forms are aligned at the mora level with a canonical
minimal edit script, then exactly one label is assigned by a fixed priority
cascade. The cascade exists because surface pairs can satisfy several
category definitions at once; the order below resolves every overlap
deterministically:

1.  identical strings                                → correct
2.  prediction contains the ``<UNK>`` sentinel       → character recognition
3.  script is exactly one deletion of っ             → gemination omission
4.  script is exactly one insertion of っ            → gemination insertion
5.  stem-final kana kept where it should have been
    dropped before っ (まつ: まった → まつった)          → stem alternation
6.  one substitution of a non-っ mora in the stem    → phonological substitution
7.  edits confined to the suffix region, or one
    deletion out of an adjacent repeated-mora pair   → morpheme boundary
8.  compound-flagged lemma with ≥2 deletions or
    substitutions inside the stem                    → compound verb
9.  anything else                                    → other

"Suffix region" means the final た/だ plus an immediately preceding っ;
"stem region" is everything before it. The canonical alignment places every
edit at its rightmost minimal position, so っ insertions and deletions land
suffix-adjacent and the same surface pair always yields the same script.

The "other" bucket is reported separately and never folded into the seven
named failure modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, ROUND_HALF_UP
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .conjugate import EMITTING_TYPES, LexicalEntry, VerbType, classify_verb
from .dataset import InflectionPair, TypeCounts
from .errors import InvalidScript, MissingPrediction, TooFewRuns
from .kana import SOKUON, UNK, segment_symbols
from .transducer import Prediction

_SUFFIX_MORAS = ("た", "だ")


class ErrorLabel(Enum):
    CORRECT = "correct"
    GEMINATION_OMISSION = "gemination-omission"
    GEMINATION_INSERTION = "gemination-insertion"
    PHONOLOGICAL_SUBSTITUTION = "phonological-substitution"
    MORPHEME_BOUNDARY = "morpheme-boundary"
    CHARACTER_RECOGNITION = "character-recognition"
    COMPOUND_VERB = "compound-verb"
    STEM_ALTERNATION_OVERREG = "stem-alternation-overregularization"
    OTHER = "other"

    @property
    def display(self) -> str:
        return _LABEL_DISPLAY[self]


_LABEL_DISPLAY = {
    ErrorLabel.CORRECT: "Correct",
    ErrorLabel.GEMINATION_OMISSION: "Gemination omission",
    ErrorLabel.GEMINATION_INSERTION: "Gemination insertion",
    ErrorLabel.PHONOLOGICAL_SUBSTITUTION: "Phonological substitution",
    ErrorLabel.MORPHEME_BOUNDARY: "Morpheme boundary",
    ErrorLabel.CHARACTER_RECOGNITION: "Character recognition (UNK)",
    ErrorLabel.COMPOUND_VERB: "Compound verb error",
    ErrorLabel.STEM_ALTERNATION_OVERREG: "Stem alternation (overregularization)",
    ErrorLabel.OTHER: "Other",
}

#: Fixed presentation order for error breakdown tables.
LABEL_ORDER = (
    ErrorLabel.GEMINATION_OMISSION,
    ErrorLabel.GEMINATION_INSERTION,
    ErrorLabel.PHONOLOGICAL_SUBSTITUTION,
    ErrorLabel.MORPHEME_BOUNDARY,
    ErrorLabel.CHARACTER_RECOGNITION,
    ErrorLabel.COMPOUND_VERB,
    ErrorLabel.STEM_ALTERNATION_OVERREG,
    ErrorLabel.OTHER,
)

GEMINATION_LABELS = frozenset({
    ErrorLabel.GEMINATION_OMISSION,
    ErrorLabel.GEMINATION_INSERTION,
})


class OpKind(Enum):
    KEEP = "keep"
    DELETE = "del"
    INSERT = "ins"
    SUBSTITUTE = "sub"


@dataclass(frozen=True)
class EditOp:
    """One alignment operation.

    ``gold_pos`` is the index into the gold mora sequence; for an insertion
    it is the point the inserted mora sits in front of (``len(gold)`` for an
    append).
    """

    kind: OpKind
    gold_pos: int
    gold: str | None = None
    pred: str | None = None

    def __str__(self) -> str:
        if self.kind == OpKind.KEEP:
            return f"keep:{self.gold}"
        if self.kind == OpKind.DELETE:
            return f"del:{self.gold}"
        if self.kind == OpKind.INSERT:
            return f"ins:{self.pred}"
        return f"sub:{self.gold}:{self.pred}"


@dataclass(frozen=True)
class EditScript:
    """Canonical minimal-cost mora alignment from gold to predicted."""

    ops: tuple[EditOp, ...]

    @property
    def cost(self) -> int:
        return sum(1 for op in self.ops if op.kind != OpKind.KEEP)

    @property
    def edits(self) -> tuple[EditOp, ...]:
        return tuple(op for op in self.ops if op.kind != OpKind.KEEP)

    def replay(self, gold_moras: Sequence[str]) -> list[str]:
        """Apply the script to the gold moras, yielding the predicted moras."""
        out: list[str] = []
        pos = 0
        for op in self.ops:
            if op.kind == OpKind.KEEP:
                out.append(gold_moras[pos])
                pos += 1
            elif op.kind == OpKind.DELETE:
                pos += 1
            elif op.kind == OpKind.INSERT:
                out.append(op.pred or "")
            else:
                out.append(op.pred or "")
                pos += 1
        return out


def align_symbols(gold: Sequence[str], pred: Sequence[str]) -> EditScript:
    """Minimal unit-cost alignment of two mora sequences, canonical form.

    The dynamic program is standard; canonicalization happens during
    backtracking, which starts at the end and prefers deletion, then
    insertion, then the diagonal among minimal-cost predecessors. That
    preference pushes every edit to its rightmost minimal position.
    """
    m, n = len(gold), len(pred)
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        dist[i][0] = i
    for j in range(n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        row = dist[i]
        prev = dist[i - 1]
        g = gold[i - 1]
        for j in range(1, n + 1):
            row[j] = min(
                prev[j] + 1,
                row[j - 1] + 1,
                prev[j - 1] + (0 if g == pred[j - 1] else 1),
            )
    ops: list[EditOp] = []
    i, j = m, n
    while i > 0 or j > 0:
        here = dist[i][j]
        if i > 0 and dist[i - 1][j] + 1 == here:
            ops.append(EditOp(OpKind.DELETE, gold_pos=i - 1, gold=gold[i - 1]))
            i -= 1
        elif j > 0 and dist[i][j - 1] + 1 == here:
            ops.append(EditOp(OpKind.INSERT, gold_pos=i, pred=pred[j - 1]))
            j -= 1
        else:
            cost = 0 if gold[i - 1] == pred[j - 1] else 1
            kind = OpKind.KEEP if cost == 0 else OpKind.SUBSTITUTE
            ops.append(EditOp(kind, gold_pos=i - 1, gold=gold[i - 1], pred=pred[j - 1]))
            i -= 1
            j -= 1
    return EditScript(ops=tuple(reversed(ops)))


def align(gold: str, pred: str) -> EditScript:
    """Canonical mora-level edit script from a gold form to a prediction.

    The prediction may contain the ``<UNK>`` sentinel, which aligns as a
    single opaque mora; any other non-hiragana content raises
    ``InvalidScript``.
    """
    return align_symbols(
        segment_symbols(gold), segment_symbols(pred, allow_unknown=True)
    )


def _suffix_region_start(gold_moras: Sequence[str]) -> int:
    n = len(gold_moras)
    if n == 0:
        return 0
    if gold_moras[-1] in _SUFFIX_MORAS and n >= 2 and gold_moras[-2] == SOKUON:
        return n - 2
    return n - 1


def _is_stem_alternation_overreg(lemma: str, gold: str, pred: str) -> bool:
    # Shape: gold drops the lemma's final kana before っ+suffix, the
    # prediction keeps it (まつ: gold まった, pred まつった).
    if len(gold) < 3 or gold[-2] != SOKUON or gold[-1] not in _SUFFIX_MORAS:
        return False
    suffix = SOKUON + gold[-1]
    return gold == lemma[:-1] + suffix and pred == lemma + suffix


def _classify_from_script(
    lemma: str,
    gold_moras: Sequence[str],
    pred: str,
    script: EditScript,
    *,
    compound: bool,
) -> ErrorLabel:
    edits = script.edits
    if len(edits) == 1:
        only = edits[0]
        if only.kind == OpKind.DELETE and only.gold == SOKUON:
            return ErrorLabel.GEMINATION_OMISSION
        if only.kind == OpKind.INSERT and only.pred == SOKUON:
            return ErrorLabel.GEMINATION_INSERTION
    gold = "".join(gold_moras)
    if _is_stem_alternation_overreg(lemma, gold, pred):
        return ErrorLabel.STEM_ALTERNATION_OVERREG
    suffix_start = _suffix_region_start(gold_moras)
    if len(edits) == 1:
        only = edits[0]
        if (
            only.kind == OpKind.SUBSTITUTE
            and only.gold != SOKUON
            and only.gold_pos < suffix_start
        ):
            return ErrorLabel.PHONOLOGICAL_SUBSTITUTION
    if all(op.gold_pos >= suffix_start for op in edits):
        return ErrorLabel.MORPHEME_BOUNDARY
    if len(edits) == 1 and edits[0].kind == OpKind.DELETE and edits[0].gold_pos < suffix_start:
        pos = edits[0].gold_pos
        mora = gold_moras[pos]
        if (pos > 0 and gold_moras[pos - 1] == mora) or (
            pos + 1 < len(gold_moras) and gold_moras[pos + 1] == mora
        ):
            return ErrorLabel.MORPHEME_BOUNDARY
    if compound:
        stem_damage = sum(
            1
            for op in edits
            if op.kind in (OpKind.DELETE, OpKind.SUBSTITUTE) and op.gold_pos < suffix_start
        )
        if stem_damage >= 2:
            return ErrorLabel.COMPOUND_VERB
    return ErrorLabel.OTHER


def classify_error(
    lemma: str,
    gold: str,
    pred: str,
    vtype: VerbType | None = None,
    *,
    compound: bool = False,
) -> ErrorLabel:
    """Assign exactly one error label to a prediction.

    The label depends only on the strings and the compound flag; ``vtype``
    is accepted for interface symmetry with audit records but does not
    influence the outcome.
    """
    del vtype
    if gold == pred:
        return ErrorLabel.CORRECT
    if UNK in pred:
        return ErrorLabel.CHARACTER_RECOGNITION
    gold_moras = segment_symbols(gold)
    script = align_symbols(gold_moras, segment_symbols(pred, allow_unknown=True))
    return _classify_from_script(lemma, gold_moras, pred, script, compound=compound)


@dataclass(frozen=True)
class AuditItem:
    """One audited instance with its label and alignment."""

    lemma: str
    gold: str
    predicted: str
    verb_type: VerbType
    label: ErrorLabel
    script: EditScript | None


@dataclass(frozen=True)
class AuditReport:
    """Per-run audit: accuracy plus error counts by label and by verb class."""

    run_id: str
    items: tuple[AuditItem, ...]
    counts_by_label: Mapping[ErrorLabel, int] = field(default_factory=dict)
    counts_by_verbtype: Mapping[VerbType, int] = field(default_factory=dict)

    @classmethod
    def from_items(cls, run_id: str, items: Iterable[AuditItem]) -> "AuditReport":
        items = tuple(items)
        by_label = {label: 0 for label in ErrorLabel}
        by_type = {vtype: 0 for vtype in EMITTING_TYPES}
        for item in items:
            by_label[item.label] += 1
            if item.label != ErrorLabel.CORRECT:
                by_type[item.verb_type] = by_type.get(item.verb_type, 0) + 1
        return cls(
            run_id=run_id,
            items=items,
            counts_by_label=by_label,
            counts_by_verbtype=by_type,
        )

    @property
    def total(self) -> int:
        return len(self.items)

    @property
    def correct(self) -> int:
        return self.counts_by_label.get(ErrorLabel.CORRECT, 0)

    @property
    def error_total(self) -> int:
        return self.total - self.correct

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    @property
    def error_lemmas(self) -> frozenset[str]:
        return frozenset(i.lemma for i in self.items if i.label != ErrorLabel.CORRECT)

    @property
    def gemination_share(self) -> float:
        errors = self.error_total
        if errors == 0:
            return 0.0
        related = sum(self.counts_by_label.get(label, 0) for label in GEMINATION_LABELS)
        return related / errors


def evaluate(
    split_pairs: Sequence[InflectionPair],
    predictions: Sequence[Prediction],
    lexicon_entries: Mapping[str, LexicalEntry] | Iterable[LexicalEntry],
    run_id: str | None = None,
) -> AuditReport:
    """Audit one prediction per split pair into an :class:`AuditReport`.

    Raises:
        MissingPrediction: if any split pair lacks a prediction.
    """
    if not isinstance(lexicon_entries, Mapping):
        lexicon_entries = {e.lemma: e for e in lexicon_entries}
    by_lemma = {p.lemma: p for p in predictions}
    items: list[AuditItem] = []
    for pair in split_pairs:
        pred = by_lemma.get(pair.lemma)
        if pred is None:
            raise MissingPrediction(pair.lemma)
        entry = lexicon_entries[pair.lemma]
        items.append(audit_item(pair, pred.predicted, entry))
    if run_id is None:
        run_id = predictions[0].source if predictions else "audit"
    return AuditReport.from_items(run_id, items)


def audit_item(pair: InflectionPair, predicted: str, entry: LexicalEntry) -> AuditItem:
    """Label one prediction, keeping the alignment for the report."""
    vtype = classify_verb(entry)
    if pair.target == predicted:
        return AuditItem(
            lemma=pair.lemma, gold=pair.target, predicted=predicted,
            verb_type=vtype, label=ErrorLabel.CORRECT, script=align(pair.target, predicted),
        )
    if UNK in predicted:
        # Alignment still succeeds for well-formed sentinel output; only
        # genuinely unalignable noise leaves the script empty.
        try:
            script = align(pair.target, predicted)
        except InvalidScript:
            script = None
        return AuditItem(
            lemma=pair.lemma, gold=pair.target, predicted=predicted,
            verb_type=vtype, label=ErrorLabel.CHARACTER_RECOGNITION, script=script,
        )
    gold_moras = segment_symbols(pair.target)
    script = align_symbols(gold_moras, segment_symbols(predicted, allow_unknown=True))
    label = _classify_from_script(
        pair.lemma, gold_moras, predicted, script, compound=entry.compound
    )
    return AuditItem(
        lemma=pair.lemma, gold=pair.target, predicted=predicted,
        verb_type=vtype, label=label, script=script,
    )


def percent_str(numerator: int, denominator: int) -> str:
    """Percentage with one decimal digit, half-up rounding (e.g. ``62.3``)."""
    if denominator == 0:
        return "0.0"
    value = Decimal(numerator) * 100 / Decimal(denominator)
    return str(value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ErrorDistRow:
    label: ErrorLabel
    count: int
    percent: str


def error_distribution(report: AuditReport) -> list[ErrorDistRow]:
    """Error counts and shares by label, in fixed presentation order.

    Percentages are over the error total. Labels with zero observations are
    omitted, mirroring how sparse failure modes drop out of summaries.
    """
    total_errors = report.error_total
    rows = []
    for label in LABEL_ORDER:
        count = report.counts_by_label.get(label, 0)
        if count == 0:
            continue
        rows.append(ErrorDistRow(label, count, percent_str(count, total_errors)))
    return rows


@dataclass(frozen=True)
class VerbTypeRow:
    verb_type: VerbType
    errors: int
    percent: str
    dataset_count: int
    overrepresentation: float | None  # error share / dataset share


def verb_class_distribution(
    report: AuditReport, lexicon_counts: TypeCounts
) -> list[VerbTypeRow]:
    """Error counts by verb class next to the class's dataset size.

    The overrepresentation ratio divides a class's share of errors by its
    share of the dataset; values well above 1 flag classes that fail out of
    proportion to their frequency.
    """
    total_errors = report.error_total
    dataset_total = lexicon_counts.total
    by_type = lexicon_counts.by_type()
    rows = []
    for vtype in EMITTING_TYPES:
        errors = report.counts_by_verbtype.get(vtype, 0)
        dataset_count = by_type[vtype]
        ratio: float | None = None
        if total_errors and dataset_total and dataset_count:
            ratio = (errors / total_errors) / (dataset_count / dataset_total)
        elif total_errors and dataset_total:
            ratio = math.inf if errors else 0.0
        rows.append(VerbTypeRow(
            verb_type=vtype,
            errors=errors,
            percent=percent_str(errors, total_errors),
            dataset_count=dataset_count,
            overrepresentation=ratio,
        ))
    return rows


@dataclass(frozen=True)
class LabelShareStats:
    mean: float
    minimum: float
    maximum: float

    @property
    def range(self) -> float:
        return self.maximum - self.minimum


@dataclass(frozen=True)
class ConsistencyReport:
    """How stable error behaviour is across runs (seeds or models)."""

    run_ids: tuple[str, ...]
    label_shares: Mapping[ErrorLabel, LabelShareStats]
    gemination_share_by_run: Mapping[str, float]
    jaccard_by_pair: Mapping[tuple[str, str], float]


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union)


def cross_run_consistency(reports: Sequence[AuditReport]) -> ConsistencyReport:
    """Per-label share spread, gemination share per run, and error-set overlap.

    Shares are fractions of each run's error total (0.0 for an error-free
    run). Overlap is the Jaccard index of error-lemma sets for every run
    pair; two error-free runs count as fully overlapping.

    Raises:
        TooFewRuns: with fewer than two reports.
    """
    if len(reports) < 2:
        raise TooFewRuns(f"consistency needs at least 2 reports, got {len(reports)}")
    label_shares: dict[ErrorLabel, LabelShareStats] = {}
    for label in LABEL_ORDER:
        shares = []
        for report in reports:
            errors = report.error_total
            count = report.counts_by_label.get(label, 0)
            shares.append(count / errors if errors else 0.0)
        label_shares[label] = LabelShareStats(
            mean=sum(shares) / len(shares), minimum=min(shares), maximum=max(shares)
        )
    gemination = {r.run_id: r.gemination_share for r in reports}
    jaccard: dict[tuple[str, str], float] = {}
    for i, first in enumerate(reports):
        for second in reports[i + 1:]:
            jaccard[(first.run_id, second.run_id)] = _jaccard(
                first.error_lemmas, second.error_lemmas
            )
    return ConsistencyReport(
        run_ids=tuple(r.run_id for r in reports),
        label_shares=label_shares,
        gemination_share_by_run=gemination,
        jaccard_by_pair=jaccard,
    )
