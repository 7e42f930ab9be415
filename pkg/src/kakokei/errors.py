"""Exception hierarchy shared across the package.

``DataError`` subclasses signal problems with user-supplied data (lexicons,
prediction files, malformed strings); the CLI maps them to exit code 1.
``ConfigError`` signals an unusable run configuration and maps to exit code 2.
"""

from __future__ import annotations


class KakokeiError(Exception):
    """Base class for all package errors."""


class DataError(KakokeiError):
    """A problem with input data rather than configuration."""


class ConfigError(KakokeiError):
    """A problem with the run configuration (paths, seeds, flags)."""


class InvalidScript(DataError):
    """Text contains a code point outside the accepted hiragana inventory."""

    def __init__(self, text: str, index: int, symbol: str, reason: str | None = None):
        self.text = text
        self.index = index
        self.symbol = symbol
        detail = reason or "not hiragana"
        super().__init__(f"invalid symbol {symbol!r} at index {index} in {text!r}: {detail}")


class ParseError(DataError):
    """A malformed line in a TSV input file."""

    def __init__(self, line_no: int, message: str, path: str | None = None):
        self.line_no = line_no
        self.path = path
        where = f"{path}:{line_no}" if path else f"line {line_no}"
        super().__init__(f"{where}: {message}")


class DeclaredTypeMismatch(DataError):
    """A lexicon row's declared verb type contradicts the classification rules."""


class ExcludedVerb(DataError):
    """Attempt to conjugate a verb that is excluded from the dataset."""


class TooFewItems(DataError):
    """Not enough instances to produce a train/dev/test split."""


class EmptyTraining(DataError):
    """Rule learning was given an empty training set."""


class UnknownLemma(DataError):
    """A prediction file names a lemma that is not in the reference split."""

    def __init__(self, lemma: str, line_no: int | None = None, path: str | None = None):
        self.lemma = lemma
        self.line_no = line_no
        where = ""
        if path or line_no is not None:
            where = f" ({path or 'line'}:{line_no})" if path else f" (line {line_no})"
        super().__init__(f"lemma {lemma!r} not present in the reference split{where}")


class MissingPrediction(DataError):
    """An audited split item has no prediction."""

    def __init__(self, lemma: str):
        self.lemma = lemma
        super().__init__(f"no prediction supplied for lemma {lemma!r}")


class TooFewRuns(DataError):
    """Cross-run consistency needs at least two audit reports."""
