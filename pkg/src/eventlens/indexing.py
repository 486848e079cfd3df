"""Event index and search: location containment expansion, per-condition
ranking with extraction/alignment confidence, traffic lights, and a
versioned record-log persistence format.

Ranking combines two confidences per query condition: how likely the field
was extracted correctly (ec) and how likely the foreign field text means
the same as the English query text (cac):

    score = beta * ec(field) * cac(query, field) + (1 - beta) * cac(query, sentence)

The second term gives partial credit when the query term only appears in
the surrounding sentence. The context condition uses cac(query, sentence)
alone. Event type is a filter, not a scored condition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import AGENT, Document, EventMention, EventLensError, PATIENT
from .providers import CacProvider

DEFAULT_BETA = 0.75

GREEN = "green"
YELLOW = "yellow"
RED = "red"
BLACK = "black"

CONDITION_AGENT = "agent"
CONDITION_PATIENT = "patient"
CONDITION_LOCATION = "location"
CONDITION_CONTEXT = "context"

INDEX_FORMAT_VERSION = 1


class GazetteerError(EventLensError):
    pass


class Gazetteer:
    """Location containment table: maps a location to every location that
    transitively contains it. Cycles are rejected at load time."""

    def __init__(self, parents: Mapping[str, Iterable[str]] | None = None):
        self._parents: dict[str, set[str]] = {}
        self._names: dict[str, str] = {}
        for child, containers in (parents or {}).items():
            for parent in containers:
                self.add(child, parent)
        self._check_acyclic()

    def add(self, child: str, parent: str) -> None:
        child_key, parent_key = child.casefold(), parent.casefold()
        self._names.setdefault(child_key, child)
        self._names.setdefault(parent_key, parent)
        self._parents.setdefault(child_key, set()).add(parent_key)

    @classmethod
    def load(cls, path: str) -> "Gazetteer":
        gaz = cls()
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                try:
                    child, parent = line.split("\t")
                except ValueError as exc:
                    raise GazetteerError(f"{path}:{lineno}: bad gazetteer line") from exc
                gaz.add(child, parent)
        gaz._check_acyclic()
        return gaz

    def _check_acyclic(self) -> None:
        visiting: set[str] = set()
        done: set[str] = set()

        def visit(node: str, trail: list[str]) -> None:
            if node in done:
                return
            if node in visiting:
                raise GazetteerError(
                    "containment cycle: " + " -> ".join(trail + [node])
                )
            visiting.add(node)
            for parent in self._parents.get(node, ()):
                visit(parent, trail + [node])
            visiting.discard(node)
            done.add(node)

        for node in list(self._parents):
            visit(node, [])

    def expand(self, location: str) -> frozenset[str]:
        """Every containing location, transitively; excludes the input."""
        start = location.casefold()
        seen: set[str] = set()
        frontier = [start]
        while frontier:
            node = frontier.pop()
            for parent in self._parents.get(node, ()):
                if parent not in seen:
                    seen.add(parent)
                    frontier.append(parent)
        return frozenset(self._names[key] for key in seen)


@dataclass(frozen=True)
class FieldValue:
    """An indexed argument field: its surface text and extraction confidence."""

    text: str
    ec: float

    def __post_init__(self):
        if not 0.0 <= self.ec <= 1.0:
            raise ValueError(f"extraction confidence out of range: {self.ec}")


@dataclass(frozen=True)
class LocationField(FieldValue):
    expanded_countries: frozenset[str] = frozenset()


@dataclass(frozen=True)
class IndexedEvent:
    """Searchable record for one extracted event."""

    event_id: str
    doc_id: str
    sentence_index: int
    sentence_text: str
    event_type: str
    agent: FieldValue | None = None
    patient: FieldValue | None = None
    location: LocationField | None = None
    when_text: str | None = None
    sentence_translation: str | None = None

    def to_dict(self) -> dict:
        def fv(value):
            return None if value is None else {"text": value.text, "ec": value.ec}

        record = {
            "event_id": self.event_id,
            "doc_id": self.doc_id,
            "sentence_index": self.sentence_index,
            "sentence_text": self.sentence_text,
            "event_type": self.event_type,
            "agent": fv(self.agent),
            "patient": fv(self.patient),
            "location": None,
            "when_text": self.when_text,
            "sentence_translation": self.sentence_translation,
        }
        if self.location is not None:
            record["location"] = {
                "text": self.location.text,
                "ec": self.location.ec,
                "expanded_countries": sorted(self.location.expanded_countries),
            }
        return record

    @classmethod
    def from_dict(cls, record: Mapping) -> "IndexedEvent":
        def fv(value):
            return None if value is None else FieldValue(value["text"], value["ec"])

        location = None
        if record.get("location") is not None:
            loc = record["location"]
            location = LocationField(
                loc["text"], loc["ec"], frozenset(loc["expanded_countries"])
            )
        return cls(
            event_id=record["event_id"],
            doc_id=record["doc_id"],
            sentence_index=record["sentence_index"],
            sentence_text=record["sentence_text"],
            event_type=record["event_type"],
            agent=fv(record.get("agent")),
            patient=fv(record.get("patient")),
            location=location,
            when_text=record.get("when_text"),
            sentence_translation=record.get("sentence_translation"),
        )


@dataclass(frozen=True)
class Query:
    """Structured search request; at least one field must be populated."""

    event_types: frozenset[str] = frozenset()
    agent: str | None = None
    patient: str | None = None
    location: str | None = None
    context: str | None = None

    def __post_init__(self):
        if not (
            self.event_types or self.agent or self.patient or self.location or self.context
        ):
            raise ValueError("empty query")

    def to_dict(self) -> dict:
        return {
            "event_types": sorted(self.event_types),
            "agent": self.agent,
            "patient": self.patient,
            "location": self.location,
            "context": self.context,
        }

    @classmethod
    def from_dict(cls, record: Mapping) -> "Query":
        return cls(
            event_types=frozenset(record.get("event_types") or ()),
            agent=record.get("agent") or None,
            patient=record.get("patient") or None,
            location=record.get("location") or None,
            context=record.get("context") or None,
        )


@dataclass(frozen=True)
class TrafficLightThresholds:
    green: float = 0.5
    yellow: float = 0.25


@dataclass(frozen=True)
class ConditionScore:
    condition: str
    score: float
    light: str


def index_event(
    event: EventMention,
    doc: Document,
    gazetteer: Gazetteer,
    event_id: str,
    translation: str | None = None,
) -> IndexedEvent:
    """Build the searchable record for one event mention.

    Where several arguments fill a role, the highest-confidence one is
    indexed (ties go to the earliest span).
    """
    sentence = doc.sentences[event.sentence_index]

    def best_field(role: str) -> FieldValue | None:
        candidates = event.arguments_for(role)
        if not candidates:
            return None
        top = max(candidates, key=lambda a: (a.confidence, (-a.span.start, -a.span.end)))
        return FieldValue(sentence.slice(top.span), top.confidence)

    location = None
    if event.where is not None:
        text = sentence.slice(event.where)
        ec = event.where_confidence if event.where_confidence is not None else 1.0
        location = LocationField(text, ec, gazetteer.expand(text))

    return IndexedEvent(
        event_id=event_id,
        doc_id=doc.id,
        sentence_index=event.sentence_index,
        sentence_text=sentence.text,
        event_type=event.event_type,
        agent=best_field(AGENT),
        patient=best_field(PATIENT),
        location=location,
        when_text=sentence.slice(event.when) if event.when is not None else None,
        sentence_translation=translation,
    )


def score_condition(
    q_text: str,
    field_value: tuple[str, float] | FieldValue | None,
    sentence_text: str,
    cac_provider: CacProvider,
    beta: float = DEFAULT_BETA,
) -> float:
    """One query condition against one event field.

    With no field, only the sentence term contributes (partial credit for
    query terms found in the surrounding context).
    """
    if not q_text:
        raise ValueError("query condition text must be non-empty")
    sentence_term = (1.0 - beta) * cac_provider.cac(q_text, sentence_text)
    if field_value is None:
        return sentence_term
    if isinstance(field_value, FieldValue):
        text, ec = field_value.text, field_value.ec
    else:
        text, ec = field_value
    return beta * ec * cac_provider.cac(q_text, text) + sentence_term


def traffic_light(
    score: float,
    field_present: bool,
    thresholds: TrafficLightThresholds = TrafficLightThresholds(),
) -> str:
    """Per-condition confidence indicator; black means the event had no
    field at all for this condition."""
    if not field_present:
        return BLACK
    if score >= thresholds.green:
        return GREEN
    if score >= thresholds.yellow:
        return YELLOW
    return RED


def score_event(
    query: Query,
    event: IndexedEvent,
    cac_provider: CacProvider,
    beta: float = DEFAULT_BETA,
    thresholds: TrafficLightThresholds = TrafficLightThresholds(),
) -> tuple[float, list[ConditionScore]] | None:
    """Total ranking score plus per-condition breakdown.

    Returns None when the event-type filter excludes the event. Location
    matches against the field text or any expanded containing location,
    whichever scores best.
    """
    if query.event_types and event.event_type not in query.event_types:
        return None
    conditions: list[ConditionScore] = []
    total = 0.0

    def add(condition: str, score: float, present: bool) -> None:
        nonlocal total
        total += score
        conditions.append(
            ConditionScore(condition, score, traffic_light(score, present, thresholds))
        )

    if query.agent is not None:
        add(
            CONDITION_AGENT,
            score_condition(query.agent, event.agent, event.sentence_text, cac_provider, beta),
            event.agent is not None,
        )
    if query.patient is not None:
        add(
            CONDITION_PATIENT,
            score_condition(query.patient, event.patient, event.sentence_text, cac_provider, beta),
            event.patient is not None,
        )
    if query.location is not None:
        if event.location is None:
            score = score_condition(
                query.location, None, event.sentence_text, cac_provider, beta
            )
            add(CONDITION_LOCATION, score, False)
        else:
            candidates = [event.location.text, *sorted(event.location.expanded_countries)]
            score = max(
                score_condition(
                    query.location,
                    (text, event.location.ec),
                    event.sentence_text,
                    cac_provider,
                    beta,
                )
                for text in candidates
            )
            add(CONDITION_LOCATION, score, True)
    if query.context is not None:
        # Context is not an event argument; only the sentence term applies.
        score = cac_provider.cac(query.context, event.sentence_text)
        add(CONDITION_CONTEXT, score, True)
    return total, conditions


@dataclass(frozen=True)
class SearchResult:
    event: IndexedEvent
    total: float
    conditions: tuple[ConditionScore, ...]


class EventIndex:
    """In-memory index over IndexedEvent records with log persistence.

    The on-disk form is a line-delimited record log: a versioned header,
    then `document` records (full extraction results, which also clear any
    previous events for that document — making re-ingestion idempotent)
    and `event` records, applied in order on load.
    """

    def __init__(self):
        self._events: dict[str, IndexedEvent] = {}
        self._doc_events: dict[str, list[str]] = {}
        self._documents: dict[str, dict] = {}

    def __len__(self) -> int:
        return len(self._events)

    @property
    def document_ids(self) -> list[str]:
        return sorted(self._documents)

    def get_document(self, doc_id: str) -> dict | None:
        return self._documents.get(doc_id)

    def events(self) -> list[IndexedEvent]:
        return [self._events[eid] for eid in sorted(self._events)]

    def add_document(self, doc_id: str, extraction: dict) -> None:
        for event_id in self._doc_events.pop(doc_id, []):
            self._events.pop(event_id, None)
        self._documents[doc_id] = extraction

    def add_event(self, event: IndexedEvent) -> None:
        previous = self._events.get(event.event_id)
        if previous is not None and previous.doc_id != event.doc_id:
            raise EventLensError(f"event id {event.event_id} reused across documents")
        self._events[event.event_id] = event
        members = self._doc_events.setdefault(event.doc_id, [])
        if event.event_id not in members:
            members.append(event.event_id)

    def search(
        self,
        query: Query,
        cac_provider: CacProvider,
        k: int = 20,
        beta: float = DEFAULT_BETA,
        thresholds: TrafficLightThresholds = TrafficLightThresholds(),
    ) -> list[SearchResult]:
        """Ranked search: descending total, ties by (doc_id, event_id)."""
        scored = []
        for event in self.events():
            outcome = score_event(query, event, cac_provider, beta, thresholds)
            if outcome is None:
                continue
            total, conditions = outcome
            scored.append(SearchResult(event, total, tuple(conditions)))
        scored.sort(key=lambda r: (-r.total, r.event.doc_id, r.event.event_id))
        return scored[: max(k, 0)]

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(
                json.dumps(
                    {"kind": "header", "format_version": INDEX_FORMAT_VERSION},
                    ensure_ascii=False,
                )
                + "\n"
            )
            for doc_id in sorted(self._documents):
                f.write(
                    json.dumps(
                        {"kind": "document", "doc_id": doc_id, "extraction": self._documents[doc_id]},
                        ensure_ascii=False,
                        sort_keys=True,
                    )
                    + "\n"
                )
            for event_id in sorted(self._events):
                f.write(
                    json.dumps(
                        {"kind": "event", "record": self._events[event_id].to_dict()},
                        ensure_ascii=False,
                        sort_keys=True,
                    )
                    + "\n"
                )

    @classmethod
    def load(cls, path: str) -> "EventIndex":
        index = cls()
        with open(path, encoding="utf-8") as f:
            header = json.loads(f.readline())
            if header.get("kind") != "header" or header.get("format_version") != INDEX_FORMAT_VERSION:
                raise EventLensError(f"unsupported index file header: {header}")
            for line in f:
                if not line.strip():
                    continue
                record = json.loads(line)
                kind = record.get("kind")
                if kind == "document":
                    index.add_document(record["doc_id"], record["extraction"])
                elif kind == "event":
                    index.add_event(IndexedEvent.from_dict(record["record"]))
                else:
                    raise EventLensError(f"unknown index record kind: {kind!r}")
        return index


def append_records(
    path: str, doc_id: str, extraction: dict, events: Sequence[IndexedEvent]
) -> None:
    """Append one document's records to an existing index log."""
    with open(path, "a", encoding="utf-8") as f:
        f.write(
            json.dumps(
                {"kind": "document", "doc_id": doc_id, "extraction": extraction},
                ensure_ascii=False,
                sort_keys=True,
            )
            + "\n"
        )
        for event in events:
            f.write(
                json.dumps(
                    {"kind": "event", "record": event.to_dict()},
                    ensure_ascii=False,
                    sort_keys=True,
                )
                + "\n"
            )
