"""Executable gold standard for hiragana past-tense conjugation.

Verb classes follow the traditional godan/ichidan split, refined so that
orthographically deviant subclasses are first-class citizens:

* Type 1: godan (u-) verbs with suffix-conditioned stem alternation.
* Type 2: ichidan (ru-) verbs; drop る, attach た.
* Type 4-1: godan verbs ending in い-row kana + る; geminate (まじる→まじった).
* Type 4-2: godan verbs ending in え-row kana + る; geminate (ねがえる→ねがえった).
* Type 4-3: いく and its compounds, which geminate instead of taking the
  regular く→いた alternation.
* Excluded: する/くる and any lemma flagged polysemous; those never reach
  dataset emission because the workbench requires exactly one past form per
  lemma string.

Whether an -いる/-える verb is godan cannot be read off the written form —
that is precisely why Types 4-1/4-2 exist — so godan behaviour is a lexicon
annotation (``godan_override``), never inferred.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import DeclaredTypeMismatch, ExcludedVerb, InvalidScript
from .kana import Vowel, is_hiragana, vowel_of

#: Dictionary-form endings a verb lemma may have.
DICTIONARY_ENDINGS = "うくぐすつぬぶむる"

#: Flags accepted in the lexicon TSV flags field.
KNOWN_FLAGS = frozenset({"compound", "polysemous"})


class VerbType(Enum):
    """Verb class tags; values match the lexicon TSV type-tag field."""

    TYPE1 = "1"
    TYPE2 = "2"
    TYPE4_1 = "4-1"
    TYPE4_2 = "4-2"
    TYPE4_3 = "4-3"
    EXCLUDED = "x"

    @property
    def display(self) -> str:
        return _DISPLAY[self]


_DISPLAY = {
    VerbType.TYPE1: "Type 1 (godan)",
    VerbType.TYPE2: "Type 2 (ichidan)",
    VerbType.TYPE4_1: "Type 4-1 (i-stem gemination)",
    VerbType.TYPE4_2: "Type 4-2 (e-stem gemination)",
    VerbType.TYPE4_3: "Type 4-3 (localized deviation)",
    VerbType.EXCLUDED: "excluded (irregular/polysemous)",
}

#: Verb types that emit dataset instances.
EMITTING_TYPES = (
    VerbType.TYPE1,
    VerbType.TYPE2,
    VerbType.TYPE4_1,
    VerbType.TYPE4_2,
    VerbType.TYPE4_3,
)

_CANONICAL_IRREGULAR = frozenset({"する", "くる"})


@dataclass(frozen=True)
class LexicalEntry:
    """One lexicon row: a lemma plus its class annotations.

    ``godan_override`` marks -いる/-える lemmas that conjugate as godan; it is
    only meaningful (and only legal) on lemmas where the written form is
    ambiguous between ichidan and godan.
    """

    lemma: str
    declared_type: VerbType | None = None
    godan_override: bool = False
    polysemous: bool = False
    compound: bool = False
    line: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.lemma) < 2:
            raise InvalidScript(self.lemma, 0, self.lemma, "lemma must have at least two kana")
        for i, ch in enumerate(self.lemma):
            if not is_hiragana(ch):
                raise InvalidScript(self.lemma, i, ch)
        if self.lemma[-1] not in DICTIONARY_ENDINGS:
            raise InvalidScript(
                self.lemma, len(self.lemma) - 1, self.lemma[-1],
                "lemma must end in a dictionary-form kana",
            )
        if self.godan_override and not _pre_ru_vowel_is_i_or_e(self.lemma):
            raise InvalidScript(
                self.lemma, len(self.lemma) - 1, self.lemma[-1],
                "godan_override requires a lemma ending in i/e-row kana + る",
            )


def _pre_ru_vowel(lemma: str) -> Vowel | None:
    if lemma[-1] != "る" or len(lemma) < 2:
        return None
    return vowel_of(lemma[-2])


def _pre_ru_vowel_is_i_or_e(lemma: str) -> bool:
    return _pre_ru_vowel(lemma) in (Vowel.I, Vowel.E)


def classify_verb(entry: LexicalEntry) -> VerbType:
    """Assign a verb class to a lexicon entry.

    Exclusions (する/くる, polysemous flags) are decided first, then いく and
    its compounds, then the -いる/-える split where ``godan_override`` turns a
    would-be Type 2 into Type 4-1 or 4-2. Everything else is Type 1.

    Raises:
        DeclaredTypeMismatch: if the entry declares a type that contradicts
            the computed one (a corrupt lexicon row).
    """
    lemma = entry.lemma
    if lemma in _CANONICAL_IRREGULAR or entry.polysemous:
        computed = VerbType.EXCLUDED
    elif lemma.endswith("いく"):
        computed = VerbType.TYPE4_3
    else:
        vowel = _pre_ru_vowel(lemma)
        if vowel in (Vowel.I, Vowel.E):
            if entry.godan_override:
                computed = VerbType.TYPE4_1 if vowel == Vowel.I else VerbType.TYPE4_2
            else:
                computed = VerbType.TYPE2
        else:
            computed = VerbType.TYPE1
    if entry.declared_type is not None and entry.declared_type != computed:
        raise DeclaredTypeMismatch(
            f"{lemma!r}: declared {entry.declared_type.value}, rules give {computed.value}"
        )
    return computed


# Godan past-tense alternations, keyed by the lemma's final kana.
_GODAN_PAST = {
    "う": "った",
    "つ": "った",
    "る": "った",
    "く": "いた",
    "ぐ": "いだ",
    "す": "した",
    "む": "んだ",
    "ぬ": "んだ",
    "ぶ": "んだ",
}


def conjugate_past(lemma: str, vtype: VerbType) -> str:
    """Past-tense form of a lemma under its verb class.

    Deterministic rule application: ichidan drops る and attaches た; godan
    (including the gemination subclasses, which all end in る) replaces the
    final kana according to the onbin table; いく-class verbs geminate where
    plain く-verbs would take the い alternation.

    Raises:
        ExcludedVerb: for the excluded class (no unique past form is defined).
    """
    if vtype == VerbType.EXCLUDED:
        raise ExcludedVerb(f"{lemma!r} is excluded from conjugation")
    if vtype == VerbType.TYPE2:
        if lemma[-1] != "る":
            raise InvalidScript(lemma, len(lemma) - 1, lemma[-1], "ichidan lemma must end in る")
        return lemma[:-1] + "た"
    if vtype == VerbType.TYPE4_3:
        if lemma[-1] != "く":
            raise InvalidScript(lemma, len(lemma) - 1, lemma[-1], "いく-class lemma must end in く")
        return lemma[:-1] + "った"
    return lemma[:-1] + _GODAN_PAST[lemma[-1]]


class IssueKind(Enum):
    DUPLICATE_LEMMA = "duplicate-lemma"
    DECLARED_TYPE_MISMATCH = "declared-type-mismatch"
    INVALID_ENDING = "invalid-ending"
    EXCLUDED_ENTRY = "excluded-entry"


#: Issue kinds that make a lexicon unusable. Exclusion notices are
#: informational: excluded rows are legitimate, they just never emit pairs.
ERROR_KINDS = frozenset({
    IssueKind.DUPLICATE_LEMMA,
    IssueKind.DECLARED_TYPE_MISMATCH,
    IssueKind.INVALID_ENDING,
})


@dataclass(frozen=True)
class LexiconIssue:
    kind: IssueKind
    lemma: str
    line: int | None = None
    detail: str = ""

    @property
    def is_error(self) -> bool:
        return self.kind in ERROR_KINDS

    def __str__(self) -> str:
        where = f" (line {self.line})" if self.line is not None else ""
        detail = f": {self.detail}" if self.detail else ""
        return f"{self.kind.value} {self.lemma}{where}{detail}"


def validate_lexicon(entries: list[LexicalEntry]) -> list[LexiconIssue]:
    """Check a lexicon for duplicates, type mismatches and exclusions.

    Issues are data, not failures: callers decide what to do with them. A
    clean lexicon (unique lemmas, consistent annotations, nothing excluded)
    yields an empty list.
    """
    issues: list[LexiconIssue] = []
    seen: dict[str, int | None] = {}
    for entry in entries:
        if entry.lemma in seen:
            issues.append(LexiconIssue(
                IssueKind.DUPLICATE_LEMMA, entry.lemma, entry.line,
                detail="lemma already defined",
            ))
            continue
        seen[entry.lemma] = entry.line
        try:
            vtype = classify_verb(entry)
        except DeclaredTypeMismatch as exc:
            issues.append(LexiconIssue(
                IssueKind.DECLARED_TYPE_MISMATCH, entry.lemma, entry.line, detail=str(exc),
            ))
            continue
        if vtype == VerbType.EXCLUDED:
            reason = "polysemous" if entry.polysemous else "canonical irregular"
            issues.append(LexiconIssue(
                IssueKind.EXCLUDED_ENTRY, entry.lemma, entry.line, detail=reason,
            ))
    return issues
