"""Subword tokenization, word-boundary span expansion, and per-word
label-conflict resolution.

Extraction models label each subword separately, which leaves two problems
for span output: spans that cover only part of a word, and words whose
subwords disagree on the label. Expansion fixes the first for languages
that delimit words with whitespace; frequency-based conflict resolution
fixes the second.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Protocol, Sequence

from .core import PipelineError, Sentence, Span

WHITESPACE_DELIMITED = "whitespace-delimited"
SCRIPTIO_CONTINUA = "scriptio-continua"

# Languages written without word-delimiting whitespace; overridable via the
# pipeline config. Matching is on the primary BCP-47 subtag.
DEFAULT_SCRIPTIO_CONTINUA = frozenset({"zh", "ja", "th", "km", "lo", "my"})


def language_class(language: str, scriptio_continua: frozenset[str] = DEFAULT_SCRIPTIO_CONTINUA) -> str:
    primary = language.split("-")[0].lower()
    return SCRIPTIO_CONTINUA if primary in scriptio_continua else WHITESPACE_DELIMITED


@dataclass(frozen=True)
class Subword:
    """One tokenizer piece. ``word_index`` is the ordinal of the
    whitespace-delimited word containing it; None for scriptio-continua."""

    text: str
    span: Span
    word_index: int | None


class SubwordTokenizer(Protocol):
    """Provider contract wrapping the real (model-specific) tokenizer."""

    identity: str

    def split(self, text: str) -> list[tuple[str, int, int]]:
        """Return (piece_text, start, end) offsets covering every
        non-whitespace character exactly once."""
        ...


class RuleSubwordTokenizer:
    """Deterministic reference tokenizer: whitespace split, then fixed
    chunking of long words. Lets every decode test run without a model."""

    def __init__(self, chunk: int = 3):
        if chunk < 1:
            raise ValueError("chunk size must be >= 1")
        self.chunk = chunk
        self.identity = f"rule-tokenizer:{chunk}"

    def split(self, text: str) -> list[tuple[str, int, int]]:
        pieces: list[tuple[str, int, int]] = []
        start = None
        for i, ch in enumerate(text + " "):
            if ch.isspace():
                if start is not None:
                    pieces.extend(self._chunk_word(text, start, i))
                    start = None
            elif start is None:
                start = i
        return pieces

    def _chunk_word(self, text: str, start: int, end: int) -> list[tuple[str, int, int]]:
        return [
            (text[i : min(i + self.chunk, end)], i, min(i + self.chunk, end))
            for i in range(start, end, self.chunk)
        ]


def _word_starts(text: str) -> list[int]:
    starts = []
    in_word = False
    for i, ch in enumerate(text):
        if ch.isspace():
            in_word = False
        elif not in_word:
            starts.append(i)
            in_word = True
    return starts


def tokenize(
    sentence: Sentence,
    tokenizer: SubwordTokenizer,
    lang_class: str = WHITESPACE_DELIMITED,
) -> list[Subword]:
    """Run the tokenizer provider and attach word indices.

    Word indices are derived here from the sentence text, not trusted from
    the provider, so any tokenizer implementation gets consistent words.
    """
    if not sentence.text.strip():
        raise PipelineError("cannot tokenize empty sentence", sentence.index)
    try:
        pieces = tokenizer.split(sentence.text)
    except Exception as exc:  # tokenizer providers are opaque
        raise PipelineError(f"tokenizer failed: {exc}", sentence.index) from exc

    _check_coverage(sentence, pieces)

    if lang_class == SCRIPTIO_CONTINUA:
        return [Subword(text, Span(s, e), None) for text, s, e in pieces]

    starts = _word_starts(sentence.text)
    subwords = []
    word = 0
    for text, s, e in pieces:
        while word + 1 < len(starts) and starts[word + 1] <= s:
            word += 1
        subwords.append(Subword(text, Span(s, e), word))
    return subwords


def _check_coverage(sentence: Sentence, pieces: Sequence[tuple[str, int, int]]) -> None:
    covered = [False] * len(sentence.text)
    last_end = 0
    for text, s, e in pieces:
        if s < last_end or e > len(sentence.text) or s >= e:
            raise PipelineError(
                f"tokenizer produced invalid span ({s}, {e})", sentence.index
            )
        if sentence.text[s:e] != text:
            raise PipelineError(
                f"tokenizer piece {text!r} does not match text at ({s}, {e})",
                sentence.index,
            )
        for i in range(s, e):
            covered[i] = True
        last_end = e
    for i, ch in enumerate(sentence.text):
        if not ch.isspace() and not covered[i]:
            raise PipelineError(
                f"tokenizer left character {i} ({ch!r}) uncovered", sentence.index
            )


def is_punctuation_text(text: str) -> bool:
    """True when every character is Unicode punctuation."""
    return bool(text) and all(unicodedata.category(c).startswith("P") for c in text)


def _is_boundary(ch: str) -> bool:
    return ch.isspace() or unicodedata.category(ch).startswith("P")


def expand_span(span: Span, sentence: Sentence, lang_class: str) -> Span:
    """Expand a span to the nearest whitespace or punctuation boundary.

    Identity for scriptio-continua languages, where partial-word labels
    cannot be detected from whitespace.
    """
    if lang_class == SCRIPTIO_CONTINUA:
        return span
    text = sentence.text
    start, end = span.start, span.end
    while start > 0 and not _is_boundary(text[start - 1]):
        start -= 1
    while end < len(text) and not _is_boundary(text[end]):
        end += 1
    return Span(start, end)


class LabelStats:
    """Label frequencies from English training data (or test fixtures);
    breaks ties when a word's subwords disagree on the label."""

    def __init__(self, counts: dict[str, int]):
        if "O" not in counts:
            raise ValueError("label stats must include the O label")
        if any(c < 0 for c in counts.values()):
            raise ValueError("label counts must be non-negative")
        self.counts = dict(counts)

    @classmethod
    def load(cls, path: str) -> "LabelStats":
        counts: dict[str, int] = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    label, count = line.split("\t")
                    counts[label] = int(count)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad stats line {line!r}") from exc
        return cls(counts)

    def frequency(self, label: str) -> int:
        return self.counts.get(label, 0)

    def __contains__(self, label: str) -> bool:
        return label in self.counts


def resolve_word_label(subword_labels: Sequence[str], stats: LabelStats) -> str:
    """Collapse a word's subword labels to one label.

    Majority vote; ties broken by higher corpus frequency, then
    lexicographically. Deterministic and order-insensitive.
    """
    if not subword_labels:
        raise ValueError("cannot resolve an empty label sequence")
    for label in subword_labels:
        if label not in stats:
            raise ValueError(f"unknown label: {label}")
    votes = Counter(subword_labels)
    top = max(votes.values())
    tied = [label for label, count in votes.items() if count == top]
    top_freq = max(stats.frequency(label) for label in tied)
    return min(label for label in tied if stats.frequency(label) == top_freq)
