"""Suffix-rule transducer and prediction-file ingestion.

The internal baseline is a purely symbolic character-level learner: for each
training pair it records how the changed lemma suffix rewrites, keyed by
progressively longer lemma suffixes so that specific contexts can out-vote
generic ones (up to ``max_suffix_len`` trailing kana). Prediction picks the
longest matching key and applies its top-ranked rule. Ties are broken by
higher count, then lexicographically smaller output, which makes training
and prediction exactly reproducible.

Audits are model-agnostic: any system's output can be loaded from a
two-column ``lemma TAB predicted`` file and pushed through the same
evaluation path as the internal baseline.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .dataset import InflectionPair
from .errors import EmptyTraining, ParseError, UnknownLemma

DEFAULT_MAX_SUFFIX_LEN = 4


@dataclass(frozen=True)
class SuffixRule:
    """Strip ``lemma_suffix`` from the end of a lemma, append ``output_suffix``."""

    lemma_suffix: str
    output_suffix: str
    count: int

    def apply(self, lemma: str) -> str:
        if self.lemma_suffix and not lemma.endswith(self.lemma_suffix):
            raise ValueError(f"{lemma!r} does not end with {self.lemma_suffix!r}")
        stem = lemma[: len(lemma) - len(self.lemma_suffix)] if self.lemma_suffix else lemma
        return stem + self.output_suffix


class Applied(NamedTuple):
    output: str
    rule: SuffixRule | None  # None means no key matched (lemma echoed)


@dataclass(frozen=True)
class RuleSet:
    """Learned rules grouped by lemma suffix, each group ranked deterministically."""

    rules: dict[str, tuple[SuffixRule, ...]]
    max_suffix_len: int

    def apply(self, lemma: str) -> Applied:
        max_len = min(len(lemma), max((len(k) for k in self.rules), default=0))
        for length in range(max_len, -1, -1):
            key = lemma[len(lemma) - length:] if length else ""
            ranked = self.rules.get(key)
            if ranked:
                return Applied(ranked[0].apply(lemma), ranked[0])
        return Applied(lemma, None)


def _common_prefix_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    for i in range(n):
        if a[i] != b[i]:
            return i
    return n


def learn_rules(
    train_pairs: Sequence[InflectionPair],
    max_suffix_len: int = DEFAULT_MAX_SUFFIX_LEN,
) -> RuleSet:
    """Induce suffix rewrite rules from training pairs.

    For each pair the changed suffix (everything after the longest common
    prefix of lemma and target) yields the base rule; the same rewrite is
    additionally keyed by longer lemma suffixes, extending leftward one kana
    at a time up to ``max_suffix_len`` (or the whole lemma if shorter).
    Counts aggregate across pairs; each key's rules are ranked by
    (count desc, output asc).

    Raises:
        EmptyTraining: if no pairs are supplied.
    """
    if not train_pairs:
        raise EmptyTraining("cannot learn rules from an empty training set")
    counts: Counter[tuple[str, str]] = Counter()
    for pair in train_pairs:
        lcp = _common_prefix_len(pair.lemma, pair.target)
        changed_in = pair.lemma[lcp:]
        changed_out = pair.target[lcp:]
        longest = min(len(pair.lemma), max(max_suffix_len, len(changed_in)))
        for length in range(len(changed_in), longest + 1):
            key = pair.lemma[len(pair.lemma) - length:] if length else ""
            output = key[: length - len(changed_in)] + changed_out
            counts[(key, output)] += 1
    grouped: dict[str, list[SuffixRule]] = {}
    for (key, output), count in counts.items():
        grouped.setdefault(key, []).append(SuffixRule(key, output, count))
    ranked = {
        key: tuple(sorted(rules, key=lambda r: (-r.count, r.output_suffix)))
        for key, rules in grouped.items()
    }
    return RuleSet(rules=ranked, max_suffix_len=max_suffix_len)


def predict(ruleset: RuleSet, lemma: str) -> str:
    """Predicted past form under the longest-suffix-match rule.

    When no key matches at all the lemma is echoed unchanged; callers that
    need to distinguish that case use :meth:`RuleSet.apply` directly.
    """
    return ruleset.apply(lemma).output


def serialize_rules(ruleset: RuleSet) -> str:
    """Deterministic text form: keys sorted, rules in rank order within a key."""
    lines = []
    for key in sorted(ruleset.rules):
        for rule in ruleset.rules[key]:
            lines.append(f"{rule.lemma_suffix}\t{rule.output_suffix}\t{rule.count}\n")
    return "".join(lines)


def write_rules(ruleset: RuleSet, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_rules(ruleset), encoding="utf-8", newline="\n")


@dataclass(frozen=True)
class Prediction:
    """One audited output: lemma, predicted string, and the producing run."""

    lemma: str
    predicted: str
    source: str


class PredictionFile(NamedTuple):
    predictions: list[Prediction]
    missing: list[str]  # split lemmas with no line in the file


def parse_predictions(
    rows: Iterable[str],
    split_pairs: Sequence[InflectionPair],
    source: str,
    path: str | None = None,
) -> PredictionFile:
    """Parse ``lemma TAB predicted`` rows against a reference split.

    Every lemma in the file must belong to the split; the result is
    reordered to split order. Split lemmas absent from the file are returned
    in ``missing`` rather than silently dropped.

    Raises:
        ParseError: wrong field count or a lemma repeated in the file.
        UnknownLemma: a file lemma that is not in the split.
    """
    split_lemmas = {pair.lemma for pair in split_pairs}
    by_lemma: dict[str, Prediction] = {}
    for line_no, raw in enumerate(rows, start=1):
        line = unicodedata.normalize("NFC", raw.rstrip("\n"))
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(line_no, f"expected 2 TAB-separated fields, got {len(fields)}", path)
        lemma, predicted = fields
        if lemma not in split_lemmas:
            raise UnknownLemma(lemma, line_no, path)
        if lemma in by_lemma:
            raise ParseError(line_no, f"duplicate prediction for lemma {lemma!r}", path)
        by_lemma[lemma] = Prediction(lemma=lemma, predicted=predicted, source=source)
    ordered = [by_lemma[p.lemma] for p in split_pairs if p.lemma in by_lemma]
    missing = [p.lemma for p in split_pairs if p.lemma not in by_lemma]
    return PredictionFile(predictions=ordered, missing=missing)


def ingest_predictions(
    path: str | Path,
    split_pairs: Sequence[InflectionPair],
    source: str | None = None,
) -> PredictionFile:
    """Load an external prediction file aligned against ``split_pairs``."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        return parse_predictions(
            handle, split_pairs, source=source or path.stem, path=str(path)
        )


def predict_pairs(
    ruleset: RuleSet, pairs: Sequence[InflectionPair], source: str
) -> list[Prediction]:
    """Run the transducer over a split, producing audit-ready predictions."""
    return [Prediction(p.lemma, predict(ruleset, p.lemma), source) for p in pairs]


def write_predictions(predictions: Sequence[Prediction], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{p.lemma}\t{p.predicted}\n" for p in predictions]
    path.write_text("".join(lines), encoding="utf-8", newline="\n")
