"""eventlens: cross-lingual event extraction and event-centric search."""

from .core import (
    AGENT,
    Argument,
    Document,
    EventGraph,
    EventMention,
    Ontology,
    PATIENT,
    RELATED_EVENT,
    Sentence,
    Span,
    load_ontology,
    make_document,
    merge_spans,
    span_relation,
)
from .indexing import EventIndex, Gazetteer, IndexedEvent, Query
from .pipeline import DocumentResult, Pipeline

__version__ = "0.1.0"

__all__ = [
    "AGENT",
    "Argument",
    "Document",
    "DocumentResult",
    "EventGraph",
    "EventIndex",
    "EventMention",
    "Gazetteer",
    "IndexedEvent",
    "Ontology",
    "PATIENT",
    "Pipeline",
    "Query",
    "RELATED_EVENT",
    "Sentence",
    "Span",
    "load_ontology",
    "make_document",
    "merge_spans",
    "span_relation",
    "__version__",
]
