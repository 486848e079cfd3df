"""Domain types shared by the whole pipeline: spans, sentences, documents,
the event ontology, and event mentions.

All types here are immutable after construction and enforce their own
invariants, so they can be shared freely across threads. Character offsets
are Unicode scalar-value indices (Python string indices), never bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable

AGENT = "agent"
PATIENT = "patient"
RELATED_EVENT = "related-event"

# Span set-relations (half-open intervals).
DISJOINT = "disjoint"
OVERLAPPING = "overlapping"
EQUAL = "equal"
CONTAINS = "contains"
CONTAINED = "contained"


class EventLensError(Exception):
    """Base class for every error raised by this package."""


class PipelineError(EventLensError):
    """Extraction failed for a sentence; carries the sentence index."""

    def __init__(self, message: str, sentence_index: int | None = None):
        super().__init__(message)
        self.sentence_index = sentence_index


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character interval [start, end) within one sentence."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.start >= self.end:
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end


def span_relation(a: Span, b: Span) -> str:
    """Exact set-relation of two half-open intervals.

    Returns one of DISJOINT, OVERLAPPING, EQUAL, CONTAINS (a ⊃ b) or
    CONTAINED (a ⊂ b).
    """
    if a == b:
        return EQUAL
    if a.end <= b.start or b.end <= a.start:
        return DISJOINT
    if a.contains(b):
        return CONTAINS
    if b.contains(a):
        return CONTAINED
    return OVERLAPPING


def merge_spans(spans: Iterable[Span]) -> list[Span]:
    """Union of spans as a minimal sorted list of maximal spans.

    Adjacent spans ([0,4) and [4,6)) merge into one. Empty input yields
    an empty list.
    """
    ordered = sorted(spans)
    merged: list[Span] = []
    for span in ordered:
        if merged and span.start <= merged[-1].end:
            if span.end > merged[-1].end:
                merged[-1] = Span(merged[-1].start, span.end)
        else:
            merged.append(span)
    return merged


@dataclass(frozen=True)
class Sentence:
    """One sentence of a document. Spans index into ``text``."""

    index: int
    text: str
    char_base: int

    def slice(self, span: Span) -> str:
        if span.end > len(self.text):
            raise ValueError(
                f"span [{span.start}, {span.end}) exceeds sentence {self.index} "
                f"of length {len(self.text)}"
            )
        return self.text[span.start : span.end]


@dataclass(frozen=True)
class Document:
    id: str
    language: str
    text: str
    sentences: tuple[Sentence, ...]

    def __post_init__(self):
        if not self.text:
            raise ValueError("document text must be non-empty")
        base = -1
        for sent in self.sentences:
            if sent.char_base <= base:
                raise ValueError("sentence char_base must be strictly increasing")
            base = sent.char_base


# Default rule-based sentence splitter. Terminal punctuation covers the
# Latin set plus the full-width/Arabic-script/Devanagari terminators; a
# newline always ends a sentence.
_TERMINALS = ".!?。！？؟۔।…"
_SENTENCE_RE = re.compile(rf"[^{_TERMINALS}\n]*(?:[{_TERMINALS}]+|\n+|$)\s*")


def split_sentences(text: str) -> list[tuple[int, str]]:
    """Split text into (char_base, sentence_text) slices.

    The slices partition the input exactly: trailing terminators and
    whitespace stay attached to the sentence they close.
    """
    pieces: list[tuple[int, str]] = []
    for match in _SENTENCE_RE.finditer(text):
        if match.group(0):
            pieces.append((match.start(), match.group(0)))
    return pieces


class SentenceSplitter:
    """Default splitter provider; swap in a model-backed one via config."""

    identity = "rule-splitter"

    def split(self, text: str) -> list[tuple[int, str]]:
        return split_sentences(text)


def make_document(
    doc_id: str,
    language: str,
    text: str,
    splitter: SentenceSplitter | None = None,
) -> Document:
    splitter = splitter or SentenceSplitter()
    sentences = tuple(
        Sentence(index=i, text=piece, char_base=base)
        for i, (base, piece) in enumerate(splitter.split(text))
    )
    return Document(id=doc_id, language=language, text=text, sentences=sentences)


ONTOLOGY_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Ontology:
    """Configured inventory of event types and argument roles.

    ``role_ids`` must be dense small integers starting at 1; they appear
    verbatim in argument-attachment model inputs.
    """

    event_types: frozenset[str]
    argument_roles: frozenset[str]
    role_ids: dict[str, int] = field(hash=False)

    def __post_init__(self):
        if AGENT not in self.argument_roles or PATIENT not in self.argument_roles:
            raise ValueError("ontology roles must include agent and patient")
        if set(self.role_ids) != set(self.argument_roles):
            raise ValueError("role_ids must cover exactly the argument roles")
        if sorted(self.role_ids.values()) != list(range(1, len(self.role_ids) + 1)):
            raise ValueError("role ids must be dense integers starting at 1")

    @property
    def has_event_arguments(self) -> bool:
        return RELATED_EVENT in self.argument_roles

    def span_roles(self) -> list[str]:
        """Roles filled by text spans (everything except related-event)."""
        return sorted(r for r in self.argument_roles if r != RELATED_EVENT)


def load_ontology(path: str) -> Ontology:
    """Load an ontology config file (JSON; see README for the schema)."""
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    version = raw.get("format_version")
    if version != ONTOLOGY_FORMAT_VERSION:
        raise ValueError(f"unsupported ontology format_version: {version!r}")
    roles = {entry["name"]: int(entry["id"]) for entry in raw["roles"]}
    return Ontology(
        event_types=frozenset(raw["event_types"]),
        argument_roles=frozenset(roles),
        role_ids=roles,
    )


@dataclass(frozen=True)
class Argument:
    role: str
    span: Span
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"argument confidence out of range: {self.confidence}")


@dataclass(frozen=True)
class EventMention:
    """A typed event in one sentence.

    Coreference merging can give an event several anchor spans; anchors are
    kept sorted and must not overlap each other. ``when``/``where`` are
    ontology-agnostic attachments with their own confidences.
    """

    event_type: str
    anchors: tuple[Span, ...]
    arguments: tuple[Argument, ...]
    sentence_index: int
    anchor_confidence: float
    when: Span | None = None
    where: Span | None = None
    when_confidence: float | None = None
    where_confidence: float | None = None

    def __post_init__(self):
        if not self.anchors:
            raise ValueError("event mention needs at least one anchor span")
        if list(self.anchors) != sorted(self.anchors):
            raise ValueError("anchor spans must be sorted")
        for left, right in zip(self.anchors, self.anchors[1:]):
            if left.overlaps(right):
                raise ValueError(f"anchor spans overlap: {left} / {right}")
        if not 0.0 <= self.anchor_confidence <= 1.0:
            raise ValueError(f"anchor confidence out of range: {self.anchor_confidence}")

    @property
    def first_anchor(self) -> Span:
        return self.anchors[0]

    def arguments_for(self, role: str) -> list[Argument]:
        return [a for a in self.arguments if a.role == role]


@dataclass(frozen=True)
class EventGraph:
    """Per-document display graph: events as nodes, related-event edges."""

    nodes: tuple[EventMention, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for src, dst in self.edges:
            if not (0 <= src < len(self.nodes) and 0 <= dst < len(self.nodes)):
                raise ValueError(f"edge ({src}, {dst}) references a missing node")
            if src == dst:
                raise ValueError(f"self-edge on node {src}")


def validate_event(event: EventMention, ontology: Ontology, sentence: Sentence) -> None:
    """Check an event against the ontology and its sentence bounds."""
    if event.event_type not in ontology.event_types:
        raise ValueError(f"unknown event type: {event.event_type}")
    length = len(sentence.text)
    spans = list(event.anchors) + [a.span for a in event.arguments]
    spans += [s for s in (event.when, event.where) if s is not None]
    for span in spans:
        if span.end > length:
            raise ValueError(f"span {span} outside sentence {sentence.index}")
    for arg in event.arguments:
        if arg.role not in ontology.argument_roles:
            raise ValueError(f"unknown argument role: {arg.role}")
