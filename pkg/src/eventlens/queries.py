"""Query construction: structured-form validation and natural-language
query parsing via the extraction pipeline itself.

An NL query like "anti-inflation protests in Vietnam" is run through the
English pipeline; the best event's type and arguments populate the
structured fields, and leftover content words become the context.
"""

from __future__ import annotations

import re
from importlib import resources
from typing import TYPE_CHECKING, Iterable, Mapping

from .core import AGENT, EventLensError, EventMention, PATIENT, Span
from .indexing import Query
from .providers import strip_edge_punctuation

if TYPE_CHECKING:
    from .core import Ontology
    from .pipeline import Pipeline

_WORD_RE = re.compile(r"\S+")


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """English function words ignored when collecting context terms."""
    if path is None:
        text = resources.files("eventlens.data").joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    return frozenset(w.strip().casefold() for w in text.splitlines() if w.strip())


def parse_structured(fields: Mapping[str, object], ontology: "Ontology") -> Query:
    """Validate raw form values into a Query.

    Unknown event types are rejected by name; a query with nothing
    populated is an error.
    """
    types = fields.get("event_types") or ()
    if isinstance(types, str):
        types = [types]
    for etype in types:
        if etype not in ontology.event_types:
            raise EventLensError(f"unknown event type: {etype}")

    def text_field(name: str) -> str | None:
        value = fields.get(name)
        if value is None:
            return None
        value = str(value).strip()
        return value or None

    try:
        return Query(
            event_types=frozenset(types),
            agent=text_field("agent"),
            patient=text_field("patient"),
            location=text_field("location"),
            context=text_field("context"),
        )
    except ValueError as exc:
        raise EventLensError(str(exc)) from exc


def _best_event(events: Iterable[tuple[int, EventMention]]) -> tuple[int, EventMention] | None:
    ranked = sorted(
        events,
        key=lambda pair: (
            -pair[1].anchor_confidence,
            pair[1].sentence_index,
            pair[1].first_anchor,
        ),
    )
    return ranked[0] if ranked else None


def _best_argument(event: EventMention, role: str):
    candidates = event.arguments_for(role)
    if not candidates:
        return None
    return max(candidates, key=lambda a: (a.confidence, -a.span.start, -a.span.end))


def nl_to_query(
    text: str,
    pipeline: "Pipeline",
    ontology: "Ontology",
    stopwords: frozenset[str] | None = None,
) -> Query:
    """Turn an English natural-language request into a structured Query.

    The highest-confidence extracted event supplies the type and the
    agent/patient/location fields; remaining non-stopword text becomes
    context. With no event at all, the query degenerates to context-only.
    """
    if not text.strip():
        raise EventLensError("empty query")
    stopwords = stopwords if stopwords is not None else load_stopwords()
    result = pipeline.extract(text, doc_id="query", language="en")

    sentences = {s.index: s for s in result.document.sentences}
    numbered = [(i, e) for i, e in enumerate(result.all_events())]
    best = _best_event(numbered)

    event_types: frozenset[str] = frozenset()
    agent = patient = location = None
    chosen_spans: list[tuple[int, Span]] = []
    if best is not None:
        _, event = best
        sentence = sentences[event.sentence_index]
        event_types = frozenset({event.event_type})
        chosen_spans.extend((event.sentence_index, a) for a in event.anchors)
        agent_arg = _best_argument(event, AGENT)
        if agent_arg is not None:
            agent = sentence.slice(agent_arg.span)
            chosen_spans.append((event.sentence_index, agent_arg.span))
        patient_arg = _best_argument(event, PATIENT)
        if patient_arg is not None:
            patient = sentence.slice(patient_arg.span)
            chosen_spans.append((event.sentence_index, patient_arg.span))
        if event.where is not None:
            location = sentence.slice(event.where)
            chosen_spans.append((event.sentence_index, event.where))

    context_words = []
    for sentence in result.document.sentences:
        spans_here = [span for idx, span in chosen_spans if idx == sentence.index]
        for match in _WORD_RE.finditer(sentence.text):
            word_span = Span(match.start(), match.end())
            if any(word_span.overlaps(s) for s in spans_here):
                continue
            stripped = strip_edge_punctuation(match.group(0))
            if not stripped or stripped.casefold() in stopwords:
                continue
            context_words.append(stripped)
    context = " ".join(context_words) or None

    if not (event_types or agent or patient or location or context):
        context = text.strip()
    return Query(
        event_types=event_types,
        agent=agent,
        patient=patient,
        location=location,
        context=context,
    )
