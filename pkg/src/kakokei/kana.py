"""Mora segmentation and phonographic features for hiragana text.

Hiragana is a moraic script: each timing unit is either a single
syllabogram (か, ん, っ), or a syllabogram plus a small-glide combiner
(しゃ, ちゅ, りょ). The small tsu っ always stands alone as a full mora.
All higher layers (conjugation, alignment, error labelling) operate on the
mora sequences produced here.

Katakana and kanji are rejected outright: the workbench deliberately works
on pure-hiragana forms, and transliteration would blur the orthographic
distinctions the audits are about. The prolonged-sound mark ー is accepted
defensively as a vowel-lengthening mora; it never occurs in conjugation
rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InvalidScript

# Reserved sentinel for an out-of-inventory symbol in model output. It is
# treated as a single opaque mora wherever predictions are segmented.
UNK = "<UNK>"

HIRAGANA_FIRST = "ぁ"  # ぁ
HIRAGANA_LAST = "ゖ"  # ゖ
LONG_VOWEL_MARK = "ー"

SOKUON = "っ"
NASAL_N = "ん"
COMBINERS = "ゃゅょ"

_SMALL_STANDALONE = "ぁぃぅぇぉゎゕゖ"


def is_hiragana(ch: str) -> bool:
    """True for code points in the hiragana block or the prolonged-sound mark."""
    return HIRAGANA_FIRST <= ch <= HIRAGANA_LAST or ch == LONG_VOWEL_MARK


class Row(Enum):
    """Consonant row of the fifty-sounds table, voiced rows kept distinct."""

    K = "k"
    G = "g"
    S = "s"
    Z = "z"
    T = "t"
    D = "d"
    N = "n"
    H = "h"
    B = "b"
    P = "p"
    M = "m"
    Y = "y"
    R = "r"
    W = "w"
    VOWEL = "vowel"
    SOKUON = "sokuon"
    NASAL_N = "nasal-n"


class Vowel(Enum):
    A = "a"
    I = "i"
    U = "u"
    E = "e"
    O = "o"
    NONE = "none"


@dataclass(frozen=True)
class KanaFeatures:
    row: Row
    vowel: Vowel


def _build_feature_table() -> dict[str, KanaFeatures]:
    table: dict[str, KanaFeatures] = {}
    vowels = (Vowel.A, Vowel.I, Vowel.U, Vowel.E, Vowel.O)
    rows = {
        Row.VOWEL: "あいうえお",
        Row.K: "かきくけこ",
        Row.G: "がぎぐげご",
        Row.S: "さしすせそ",
        Row.Z: "ざじずぜぞ",
        Row.T: "たちつてと",
        Row.D: "だぢづでど",
        Row.N: "なにぬねの",
        Row.H: "はひふへほ",
        Row.B: "ばびぶべぼ",
        Row.P: "ぱぴぷぺぽ",
        Row.M: "まみむめも",
        Row.R: "らりるれろ",
    }
    for row, kana in rows.items():
        for ch, vowel in zip(kana, vowels):
            table[ch] = KanaFeatures(row, vowel)
    for ch, vowel in zip("ゃゅょ", (Vowel.A, Vowel.U, Vowel.O)):
        table[ch] = KanaFeatures(Row.Y, vowel)
    for ch, vowel in zip("やゆよ", (Vowel.A, Vowel.U, Vowel.O)):
        table[ch] = KanaFeatures(Row.Y, vowel)
    for ch, vowel in zip("わゐゑを", (Vowel.A, Vowel.I, Vowel.E, Vowel.O)):
        table[ch] = KanaFeatures(Row.W, vowel)
    for ch, vowel in zip("ぁぃぅぇぉ", vowels):
        table[ch] = KanaFeatures(Row.VOWEL, vowel)
    table["ゎ"] = KanaFeatures(Row.W, Vowel.A)
    table["ゕ"] = KanaFeatures(Row.K, Vowel.A)
    table["ゖ"] = KanaFeatures(Row.K, Vowel.E)
    # ゔ only occurs in loanwords; filed under the plain vowel row.
    table["ゔ"] = KanaFeatures(Row.VOWEL, Vowel.U)
    table[SOKUON] = KanaFeatures(Row.SOKUON, Vowel.NONE)
    table[NASAL_N] = KanaFeatures(Row.NASAL_N, Vowel.NONE)
    table[LONG_VOWEL_MARK] = KanaFeatures(Row.VOWEL, Vowel.NONE)
    return table


_FEATURES = _build_feature_table()

_COMBINER_VOWEL = {"ゃ": Vowel.A, "ゅ": Vowel.U, "ょ": Vowel.O}


@dataclass(frozen=True)
class Mora:
    """One hiragana timing unit: a base syllabogram plus an optional glide.

    The small っ never carries a combiner; it is always its own mora.
    """

    base: str
    combiner: str | None = None

    def __post_init__(self) -> None:
        if len(self.base) != 1 or not is_hiragana(self.base):
            raise InvalidScript(self.base, 0, self.base, "mora base must be one hiragana code point")
        if self.combiner is not None:
            if self.combiner not in COMBINERS:
                raise InvalidScript(self.text, 1, self.combiner, "combiner must be small ya/yu/yo")
            if self.base == SOKUON:
                raise InvalidScript(self.text, 1, self.combiner, "small tsu cannot take a combiner")

    @property
    def text(self) -> str:
        return self.base + (self.combiner or "")

    def __str__(self) -> str:
        return self.text


def segment_moras(text: str) -> tuple[Mora, ...]:
    """Split a hiragana string into moras.

    Small ya/yu/yo attach to the immediately preceding base; small っ stands
    alone. Concatenating the result reproduces ``text`` exactly.

    Raises:
        InvalidScript: on a non-hiragana code point, or a combiner with no
            attachable base (start of string, after っ, or after an already
            combined mora).
    """
    if not text:
        raise InvalidScript(text, 0, "", "empty string")
    moras: list[Mora] = []
    for i, ch in enumerate(text):
        if not is_hiragana(ch):
            raise InvalidScript(text, i, ch)
        if ch in COMBINERS:
            if not moras:
                raise InvalidScript(text, i, ch, "combiner at start of string")
            prev = moras[-1]
            if prev.combiner is not None or prev.base == SOKUON:
                raise InvalidScript(text, i, ch, "combiner has no attachable base")
            moras[-1] = Mora(prev.base, ch)
        else:
            moras.append(Mora(ch))
    return tuple(moras)


def mora_texts(text: str) -> tuple[str, ...]:
    """Mora strings of a hiragana string (each element one mora's text)."""
    return tuple(m.text for m in segment_moras(text))


def segment_symbols(text: str, *, allow_unknown: bool = False) -> tuple[str, ...]:
    """Segment ``text`` into mora strings, optionally passing UNK sentinels through.

    With ``allow_unknown`` the literal ``<UNK>`` substring becomes a single
    opaque symbol; everything between sentinels must still be hiragana.
    """
    if not allow_unknown or UNK not in text:
        return mora_texts(text)
    symbols: list[str] = []
    rest = text
    while rest:
        idx = rest.find(UNK)
        if idx == -1:
            symbols.extend(mora_texts(rest))
            break
        if idx > 0:
            symbols.extend(mora_texts(rest[:idx]))
        symbols.append(UNK)
        rest = rest[idx + len(UNK):]
    return tuple(symbols)


def kana_features(mora: Mora) -> KanaFeatures:
    """Gojūon (row, vowel) decomposition of a mora.

    Total over valid moras: every plain syllabogram has exactly one (row,
    vowel) pair, the glide of a combined mora supplies the vowel, and っ/ん
    carry no vowel.
    """
    base = _FEATURES[mora.base]
    if mora.combiner is None:
        return base
    return KanaFeatures(base.row, _COMBINER_VOWEL[mora.combiner])


def vowel_of(ch: str) -> Vowel:
    """Vowel tag of a single syllabogram (convenience for classification)."""
    return _FEATURES[ch].vowel


def row_of(ch: str) -> Row:
    """Row tag of a single syllabogram."""
    return _FEATURES[ch].row


def find_unknown_symbols(text: str, alphabet: set[str]) -> list[tuple[int, str]]:
    """Positions of symbols outside a training-time character inventory.

    The text is scanned symbol by symbol, where a symbol is one code point
    except that a literal ``<UNK>`` substring counts as a single symbol. A
    sentinel is always reported: it marks an unknown by definition, whether
    or not the inventory happens to contain it.
    """
    unknown: list[tuple[int, str]] = []
    index = 0
    rest = text
    while rest:
        if rest.startswith(UNK):
            unknown.append((index, UNK))
            rest = rest[len(UNK):]
        else:
            ch = rest[0]
            if ch not in alphabet:
                unknown.append((index, ch))
            rest = rest[1:]
        index += 1
    return unknown
