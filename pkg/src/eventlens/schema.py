"""The documented JSON schemas for extraction output, graph export,
translation results, and search responses, plus (de)serializers.

Offsets everywhere are Unicode scalar-value indices into the owning
sentence's text (never bytes). Every serializer sorts keys and lists
deterministically so golden files are byte-stable.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .core import Argument, Document, EventMention, Sentence, Span
from .indexing import SearchResult
from .pipeline import DocumentResult, DocumentTranslation

EXTRACTION_FORMAT_VERSION = 1


def span_to_dict(span: Span, sentence: Sentence) -> dict:
    return {"start": span.start, "end": span.end, "text": sentence.slice(span)}


def _span_from_dict(record: Mapping) -> Span:
    return Span(record["start"], record["end"])


def event_to_dict(event: EventMention, sentence: Sentence) -> dict:
    return {
        "event_type": event.event_type,
        "sentence_index": event.sentence_index,
        "anchor_confidence": event.anchor_confidence,
        "anchors": [span_to_dict(a, sentence) for a in event.anchors],
        "arguments": [
            {
                "role": arg.role,
                "confidence": arg.confidence,
                **span_to_dict(arg.span, sentence),
            }
            for arg in event.arguments
        ],
        "when": span_to_dict(event.when, sentence) if event.when else None,
        "where": span_to_dict(event.where, sentence) if event.where else None,
        "when_confidence": event.when_confidence,
        "where_confidence": event.where_confidence,
    }


def event_from_dict(record: Mapping) -> EventMention:
    return EventMention(
        event_type=record["event_type"],
        anchors=tuple(sorted(_span_from_dict(a) for a in record["anchors"])),
        arguments=tuple(
            Argument(a["role"], _span_from_dict(a), a["confidence"])
            for a in record["arguments"]
        ),
        sentence_index=record["sentence_index"],
        anchor_confidence=record["anchor_confidence"],
        when=_span_from_dict(record["when"]) if record.get("when") else None,
        where=_span_from_dict(record["where"]) if record.get("where") else None,
        when_confidence=record.get("when_confidence"),
        where_confidence=record.get("where_confidence"),
    )


def graph_to_dict(result: DocumentResult) -> dict:
    sentences = {s.index: s for s in result.document.sentences}
    nodes = []
    for index, event in enumerate(result.all_events()):
        sentence = sentences[event.sentence_index]
        nodes.append(
            {
                "index": index,
                "event_type": event.event_type,
                "sentence_index": event.sentence_index,
                "anchor_texts": [sentence.slice(a) for a in event.anchors],
                "arguments": [
                    {"role": arg.role, "text": sentence.slice(arg.span)}
                    for arg in event.arguments
                ],
            }
        )
    edges = [
        {"source": a, "target": b, "label": "related-event"}
        for a, b in result.graph.edges
    ]
    return {"nodes": nodes, "edges": edges}


def document_result_to_dict(result: DocumentResult) -> dict:
    doc = result.document
    return {
        "format_version": EXTRACTION_FORMAT_VERSION,
        "offsets": "unicode-scalar-values",
        "document": {"id": doc.id, "language": doc.language, "text": doc.text},
        "sentences": [
            {
                "index": s.sentence.index,
                "text": s.sentence.text,
                "char_base": s.sentence.char_base,
                "events": [event_to_dict(e, s.sentence) for e in s.events],
                "related_edges": [list(edge) for edge in s.related_edges],
            }
            for s in result.sentences
        ],
        "graph": graph_to_dict(result),
        "providers": dict(sorted(result.providers.items())),
    }


def events_by_document(records: Sequence[Mapping]) -> dict[str, list[EventMention]]:
    """doc_id -> events, from parsed extraction-result records."""
    out: dict[str, list[EventMention]] = {}
    for record in records:
        doc_id = record["document"]["id"]
        events = []
        for sentence in record["sentences"]:
            events.extend(event_from_dict(e) for e in sentence["events"])
        out[doc_id] = events
    return out


def translation_to_dict(translation: DocumentTranslation) -> dict:
    return {
        "doc_id": translation.doc_id,
        "sentences": [
            {
                "sentence_index": s.sentence_index,
                "translation": s.translation,
                "projections": [
                    {
                        "event_index": p.event_index,
                        "kind": p.kind,
                        "role": p.role,
                        "source": {"start": p.source.start, "end": p.source.end},
                        "target": (
                            None
                            if p.target is None
                            else {"start": p.target.start, "end": p.target.end}
                        ),
                    }
                    for p in s.projections
                ],
            }
            for s in translation.sentences
        ],
    }


def search_results_to_dict(
    results: Sequence[SearchResult], query_echo: Mapping
) -> dict:
    return {
        "query": dict(query_echo),
        "results": [
            {
                "event": r.event.to_dict(),
                "total": r.total,
                "conditions": [
                    {"condition": c.condition, "score": c.score, "light": c.light}
                    for c in r.conditions
                ],
            }
            for r in results
        ],
    }


# --- JSON Schemas (draft 2020-12) used by the validation tests and
# --- published to API consumers.

_SPAN_SCHEMA = {
    "type": "object",
    "properties": {
        "start": {"type": "integer", "minimum": 0},
        "end": {"type": "integer", "minimum": 1},
        "text": {"type": "string"},
    },
    "required": ["start", "end", "text"],
}

_EVENT_SCHEMA = {
    "type": "object",
    "properties": {
        "event_type": {"type": "string"},
        "sentence_index": {"type": "integer", "minimum": 0},
        "anchor_confidence": {"type": "number", "minimum": 0, "maximum": 1},
        "anchors": {"type": "array", "items": _SPAN_SCHEMA, "minItems": 1},
        "arguments": {
            "type": "array",
            "items": {
                "allOf": [
                    _SPAN_SCHEMA,
                    {
                        "type": "object",
                        "properties": {
                            "role": {"type": "string"},
                            "confidence": {"type": "number", "minimum": 0, "maximum": 1},
                        },
                        "required": ["role", "confidence"],
                    },
                ]
            },
        },
        "when": {"oneOf": [{"type": "null"}, _SPAN_SCHEMA]},
        "where": {"oneOf": [{"type": "null"}, _SPAN_SCHEMA]},
    },
    "required": [
        "event_type",
        "sentence_index",
        "anchor_confidence",
        "anchors",
        "arguments",
        "when",
        "where",
    ],
}

EXTRACTION_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "extraction-result",
    "type": "object",
    "properties": {
        "format_version": {"const": EXTRACTION_FORMAT_VERSION},
        "offsets": {"const": "unicode-scalar-values"},
        "document": {
            "type": "object",
            "properties": {
                "id": {"type": "string"},
                "language": {"type": "string"},
                "text": {"type": "string", "minLength": 1},
            },
            "required": ["id", "language", "text"],
        },
        "sentences": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "index": {"type": "integer", "minimum": 0},
                    "text": {"type": "string"},
                    "char_base": {"type": "integer", "minimum": 0},
                    "events": {"type": "array", "items": _EVENT_SCHEMA},
                    "related_edges": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "integer", "minimum": 0},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                },
                "required": ["index", "text", "char_base", "events", "related_edges"],
            },
        },
        "graph": {
            "type": "object",
            "properties": {
                "nodes": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "index": {"type": "integer"},
                            "event_type": {"type": "string"},
                            "sentence_index": {"type": "integer"},
                            "anchor_texts": {
                                "type": "array",
                                "items": {"type": "string"},
                                "minItems": 1,
                            },
                            "arguments": {"type": "array"},
                        },
                        "required": ["index", "event_type", "sentence_index", "anchor_texts"],
                    },
                },
                "edges": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "source": {"type": "integer"},
                            "target": {"type": "integer"},
                            "label": {"const": "related-event"},
                        },
                        "required": ["source", "target", "label"],
                    },
                },
            },
            "required": ["nodes", "edges"],
        },
        "providers": {"type": "object"},
    },
    "required": ["format_version", "offsets", "document", "sentences", "graph", "providers"],
}

TRANSLATION_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "translation-result",
    "type": "object",
    "properties": {
        "status": {"enum": ["pending", "done", "unavailable"]},
        "doc_id": {"type": "string"},
        "sentences": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "sentence_index": {"type": "integer", "minimum": 0},
                    "translation": {"type": "string"},
                    "projections": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {
                                "event_index": {"type": "integer", "minimum": 0},
                                "kind": {"enum": ["anchor", "argument", "when", "where"]},
                                "role": {"type": ["string", "null"]},
                                "source": {
                                    "type": "object",
                                    "properties": {
                                        "start": {"type": "integer"},
                                        "end": {"type": "integer"},
                                    },
                                    "required": ["start", "end"],
                                },
                                "target": {
                                    "oneOf": [
                                        {"type": "null"},
                                        {
                                            "type": "object",
                                            "properties": {
                                                "start": {"type": "integer"},
                                                "end": {"type": "integer"},
                                            },
                                            "required": ["start", "end"],
                                        },
                                    ]
                                },
                            },
                            "required": ["event_index", "kind", "role", "source", "target"],
                        },
                    },
                },
                "required": ["sentence_index", "translation", "projections"],
            },
        },
    },
    "required": ["status"],
}

SEARCH_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "search-response",
    "type": "object",
    "properties": {
        "query": {
            "type": "object",
            "properties": {
                "event_types": {"type": "array", "items": {"type": "string"}},
                "agent": {"type": ["string", "null"]},
                "patient": {"type": ["string", "null"]},
                "location": {"type": ["string", "null"]},
                "context": {"type": ["string", "null"]},
            },
            "required": ["event_types", "agent", "patient", "location", "context"],
        },
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "event": {"type": "object"},
                    "total": {"type": "number"},
                    "conditions": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {
                                "condition": {
                                    "enum": ["agent", "patient", "location", "context"]
                                },
                                "score": {"type": "number", "minimum": 0},
                                "light": {"enum": ["green", "yellow", "red", "black"]},
                            },
                            "required": ["condition", "score", "light"],
                        },
                    },
                },
                "required": ["event", "total", "conditions"],
            },
        },
    },
    "required": ["query", "results"],
}
