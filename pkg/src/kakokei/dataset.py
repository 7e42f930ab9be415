"""Lexicon ingestion, instance generation, seeded splits and type statistics.

File formats (all UTF-8, NFC, LF line endings):

* Lexicon TSV: ``lemma TAB type-tag TAB flags`` per row, ``#`` comments and
  blank lines allowed. type-tag is one of ``1, 2, 4-1, 4-2, 4-3, x``; flags
  is a comma-separated subset of ``compound, polysemous`` (may be empty).
* Instance TSV: ``lemma TAB target TAB _`` per row, exactly one LF per
  record. Split files are written as ``{stem}.train/.dev/.test``.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .conjugate import (
    DICTIONARY_ENDINGS,
    EMITTING_TYPES,
    KNOWN_FLAGS,
    LexicalEntry,
    LexiconIssue,
    IssueKind,
    VerbType,
    classify_verb,
    conjugate_past,
    validate_lexicon,
)
from .errors import InvalidScript, ParseError, TooFewItems
from .kana import is_hiragana
from .rng import Xorshift64Star

#: Placeholder tag carried by every instance; the mapping is learned without
#: explicit morphosyntactic features.
PLACEHOLDER_TAG = "_"

_TAG_TO_TYPE = {t.value: t for t in VerbType}


@dataclass(frozen=True)
class InflectionPair:
    """One instance: lemma, gold past form, placeholder tag."""

    lemma: str
    target: str
    tag: str = PLACEHOLDER_TAG


@dataclass(frozen=True)
class SplitSet:
    """An 80/10/10 partition of instance pairs, keyed by the seed that made it."""

    train: tuple[InflectionPair, ...]
    dev: tuple[InflectionPair, ...]
    test: tuple[InflectionPair, ...]
    seed: int


@dataclass(frozen=True)
class TypeCounts:
    """Dataset size by verb class. Excluded entries never count toward the total."""

    type1: int = 0
    type2: int = 0
    type4_1: int = 0
    type4_2: int = 0
    type4_3: int = 0
    excluded: int = 0

    @property
    def total(self) -> int:
        return self.type1 + self.type2 + self.type4_1 + self.type4_2 + self.type4_3

    @property
    def type4(self) -> int:
        return self.type4_1 + self.type4_2 + self.type4_3

    def by_type(self) -> dict[VerbType, int]:
        return {
            VerbType.TYPE1: self.type1,
            VerbType.TYPE2: self.type2,
            VerbType.TYPE4_1: self.type4_1,
            VerbType.TYPE4_2: self.type4_2,
            VerbType.TYPE4_3: self.type4_3,
        }


@dataclass
class Lexicon:
    """Parsed lexicon: every row retained, excluded rows merely marked."""

    entries: list[LexicalEntry]
    issues: list[LexiconIssue]
    path: Path | None = None

    def __post_init__(self) -> None:
        self._types: dict[str, VerbType] = {}
        for entry in self.entries:
            if entry.lemma not in self._types:
                self._types[entry.lemma] = classify_verb(entry)
        self.by_lemma: dict[str, LexicalEntry] = {e.lemma: e for e in reversed(self.entries)}

    @property
    def has_errors(self) -> bool:
        return any(issue.is_error for issue in self.issues)

    def entry(self, lemma: str) -> LexicalEntry:
        return self.by_lemma[lemma]

    def verb_type(self, lemma: str) -> VerbType:
        return self._types[lemma]

    def emitting_entries(self) -> list[LexicalEntry]:
        return [e for e in self.entries if self._types[e.lemma] != VerbType.EXCLUDED]


def _parse_flags(raw: str, line_no: int, path: str | None) -> frozenset[str]:
    if not raw:
        return frozenset()
    flags = frozenset(part.strip() for part in raw.split(",") if part.strip())
    unknown = flags - KNOWN_FLAGS
    if unknown:
        raise ParseError(line_no, f"unknown flags {sorted(unknown)}", path)
    return flags


def parse_lexicon_rows(
    rows: Iterable[str], path: str | None = None
) -> tuple[list[LexicalEntry], list[LexiconIssue]]:
    """Parse lexicon rows into entries, surfacing per-row validation issues.

    Structurally broken rows (wrong field count, unknown tag or flag) raise
    ``ParseError``; a non-hiragana lemma raises ``InvalidScript`` with the
    line recorded in the message. Rows that parse but violate entry
    invariants (bad ending, override on the wrong shape) become issues and
    are skipped, so one bad row does not hide the rest of the report.
    """
    entries: list[LexicalEntry] = []
    issues: list[LexiconIssue] = []
    for line_no, raw in enumerate(rows, start=1):
        line = unicodedata.normalize("NFC", raw.rstrip("\n"))
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(line_no, f"expected 3 TAB-separated fields, got {len(fields)}", path)
        lemma, tag, flags_raw = fields
        if tag not in _TAG_TO_TYPE:
            raise ParseError(line_no, f"unknown type tag {tag!r}", path)
        flags = _parse_flags(flags_raw, line_no, path)
        for i, ch in enumerate(lemma):
            if not is_hiragana(ch):
                raise InvalidScript(lemma, i, ch, f"line {line_no}")
        if len(lemma) < 2 or lemma[-1] not in DICTIONARY_ENDINGS:
            issues.append(LexiconIssue(
                IssueKind.INVALID_ENDING, lemma, line_no,
                detail="lemma must end in a dictionary-form kana",
            ))
            continue
        declared = _TAG_TO_TYPE[tag]
        try:
            entry = LexicalEntry(
                lemma=lemma,
                declared_type=declared,
                godan_override=declared in (VerbType.TYPE4_1, VerbType.TYPE4_2),
                polysemous="polysemous" in flags,
                compound="compound" in flags,
                line=line_no,
            )
        except InvalidScript as exc:
            issues.append(LexiconIssue(
                IssueKind.DECLARED_TYPE_MISMATCH, lemma, line_no, detail=exc.args[0],
            ))
            continue
        entries.append(entry)
    issues.extend(validate_lexicon(entries))
    return entries, issues


def ingest_lexicon(path: str | Path) -> Lexicon:
    """Read and validate a lexicon TSV file."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        entries, issues = parse_lexicon_rows(handle, path=str(path))
    return Lexicon(entries=entries, issues=issues, path=path)


def generate_pairs(entries: Sequence[LexicalEntry]) -> list[InflectionPair]:
    """One instance per non-excluded entry, targets from the conjugation rules.

    Order follows the lexicon; excluded entries are skipped, never an error.
    """
    pairs: list[InflectionPair] = []
    for entry in entries:
        vtype = classify_verb(entry)
        if vtype == VerbType.EXCLUDED:
            continue
        pairs.append(InflectionPair(entry.lemma, conjugate_past(entry.lemma, vtype)))
    return pairs


def stats(entries: Sequence[LexicalEntry]) -> TypeCounts:
    """Counts by verb class; excluded rows are tallied separately."""
    tally = {vtype: 0 for vtype in VerbType}
    for entry in entries:
        tally[classify_verb(entry)] += 1
    return TypeCounts(
        type1=tally[VerbType.TYPE1],
        type2=tally[VerbType.TYPE2],
        type4_1=tally[VerbType.TYPE4_1],
        type4_2=tally[VerbType.TYPE4_2],
        type4_3=tally[VerbType.TYPE4_3],
        excluded=tally[VerbType.EXCLUDED],
    )


def _split_sizes(n: int) -> tuple[int, int, int]:
    n_train = (n * 8) // 10
    n_dev = n // 10
    return n_train, n_dev, n - n_train - n_dev


def split(
    pairs: Sequence[InflectionPair],
    seed: int,
    *,
    stratify_types: dict[str, VerbType] | None = None,
) -> SplitSet:
    """Deterministic 80/10/10 split keyed only by ``seed``.

    The pair list is shuffled with the package's portable PRNG and sliced
    contiguously into ``floor(0.8 n)`` / ``floor(0.1 n)`` / remainder. With
    ``stratify_types`` (a lemma → verb type mapping), each class is shuffled
    and sliced separately and per-class quotas are fitted to the same global
    sizes by largest remainder, so the three sizes are identical either way.

    Raises:
        TooFewItems: if fewer than 10 pairs are supplied.
    """
    n = len(pairs)
    if n < 10:
        raise TooFewItems(f"need at least 10 pairs to split, got {n}")
    n_train, n_dev, _ = _split_sizes(n)
    if stratify_types is None:
        order = list(pairs)
        Xorshift64Star(seed).shuffle(order)
        return SplitSet(
            train=tuple(order[:n_train]),
            dev=tuple(order[n_train:n_train + n_dev]),
            test=tuple(order[n_train + n_dev:]),
            seed=seed,
        )
    return _stratified_split(pairs, seed, stratify_types, n_train, n_dev)


def _largest_remainder(targets: list[float], caps: list[int], total: int) -> list[int]:
    base = [min(int(t), cap) for t, cap in zip(targets, caps)]
    remainder = total - sum(base)
    order = sorted(
        range(len(targets)),
        key=lambda i: (-(targets[i] - int(targets[i])), i),
    )
    for i in order:
        if remainder == 0:
            break
        if base[i] < caps[i]:
            base[i] += 1
            remainder -= 1
    # Caps can exhaust the fractional candidates; top up wherever room remains.
    for i in range(len(base)):
        while remainder > 0 and base[i] < caps[i]:
            base[i] += 1
            remainder -= 1
    return base


def _stratified_split(
    pairs: Sequence[InflectionPair],
    seed: int,
    types: dict[str, VerbType],
    n_train: int,
    n_dev: int,
) -> SplitSet:
    n = len(pairs)
    buckets: dict[VerbType, list[InflectionPair]] = {t: [] for t in EMITTING_TYPES}
    for pair in pairs:
        buckets[types[pair.lemma]].append(pair)
    rng = Xorshift64Star(seed)
    for vtype in EMITTING_TYPES:
        rng.shuffle(buckets[vtype])
    sizes = [len(buckets[t]) for t in EMITTING_TYPES]
    train_q = _largest_remainder([s * n_train / n for s in sizes], sizes, n_train)
    dev_caps = [s - q for s, q in zip(sizes, train_q)]
    dev_q = _largest_remainder([s * n_dev / n for s in sizes], dev_caps, n_dev)
    train: list[InflectionPair] = []
    dev: list[InflectionPair] = []
    test: list[InflectionPair] = []
    for vtype, tq, dq in zip(EMITTING_TYPES, train_q, dev_q):
        bucket = buckets[vtype]
        train.extend(bucket[:tq])
        dev.extend(bucket[tq:tq + dq])
        test.extend(bucket[tq + dq:])
    return SplitSet(train=tuple(train), dev=tuple(dev), test=tuple(test), seed=seed)


def write_sigmorphon(pairs: Sequence[InflectionPair], path: str | Path) -> None:
    """Write instance pairs as TAB-separated triples, one LF per record."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{p.lemma}\t{p.target}\t{p.tag}\n" for p in pairs]
    path.write_text(unicodedata.normalize("NFC", "".join(lines)), encoding="utf-8", newline="\n")


def read_sigmorphon(path: str | Path) -> list[InflectionPair]:
    """Read instance pairs; the inverse of :func:`write_sigmorphon`.

    Raises:
        ParseError: on any line that does not have exactly three fields.
    """
    path = Path(path)
    pairs: list[InflectionPair] = []
    with path.open("r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = unicodedata.normalize("NFC", raw.rstrip("\n"))
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(
                    line_no, f"expected 3 TAB-separated fields, got {len(fields)}", str(path)
                )
            pairs.append(InflectionPair(fields[0], fields[1], fields[2]))
    return pairs


def write_split(split_set: SplitSet, directory: str | Path, stem: str = "dataset") -> dict[str, Path]:
    """Write the three split files as ``{stem}.train/.dev/.test``."""
    directory = Path(directory)
    paths = {}
    for part in ("train", "dev", "test"):
        out = directory / f"{stem}.{part}"
        write_sigmorphon(getattr(split_set, part), out)
        paths[part] = out
    return paths
