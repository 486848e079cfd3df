"""Event-centric document summary: participant grouping, event-type
categories, and highlight computation for the summary view.

Participant grouping is heuristic string matching over the display texts
(English translations when available): case-insensitive exact matches
group first, then groups merge when one name is an ordered token
subsequence of another ("Putin" joins "Vladimir Putin").
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import AGENT, Document, EventLensError, EventMention, PATIENT, Span
from .providers import normalize_phrase


def load_category_table(path: str) -> dict[str, str]:
    """`event_type<TAB>category` per line."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            try:
                event_type, category = line.split("\t")
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad category line") from exc
            table[event_type] = category
    return table


@dataclass(frozen=True)
class ParticipantGroup:
    name: str
    members: tuple[tuple[int, Span], ...]  # (sentence index, span)


def _is_token_subsequence(short: tuple[str, ...], long: tuple[str, ...]) -> bool:
    it = iter(long)
    return all(any(tok == candidate for candidate in it) for tok in short)


def group_participants(
    events: Sequence[EventMention],
    doc: Document,
    display_texts: Mapping[tuple[int, Span], str] | None = None,
) -> list[ParticipantGroup]:
    """Partition agent/patient argument spans into named groups.

    ``display_texts`` (say, projected translations) override the source
    text per span; the group's display name is its longest member text.
    """
    sentences = {s.index: s for s in doc.sentences}
    occurrences: dict[tuple[int, Span], str] = {}
    for event in events:
        for arg in event.arguments:
            if arg.role not in (AGENT, PATIENT):
                continue
            key = (event.sentence_index, arg.span)
            if key in occurrences:
                continue
            if display_texts is not None and key in display_texts:
                occurrences[key] = display_texts[key]
            else:
                occurrences[key] = sentences[event.sentence_index].slice(arg.span)
    if not occurrences:
        return []

    keys = sorted(occurrences, key=lambda k: (k[0], k[1]))
    texts = [occurrences[k] for k in keys]
    folded = [t.casefold() for t in texts]
    tokens = [normalize_phrase(t) for t in texts]

    parent = list(range(len(keys)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if folded[i] == folded[j]:
                union(i, j)
            elif tokens[i] and tokens[j]:
                short, long = sorted((tokens[i], tokens[j]), key=len)
                if _is_token_subsequence(short, long):
                    union(i, j)

    clusters: dict[int, list[int]] = {}
    for i in range(len(keys)):
        clusters.setdefault(find(i), []).append(i)

    groups = []
    for members in clusters.values():
        longest = max(len(texts[i]) for i in members)
        name = min(texts[i] for i in members if len(texts[i]) == longest)
        groups.append(
            ParticipantGroup(name=name, members=tuple(keys[i] for i in sorted(members)))
        )
    groups.sort(key=lambda g: (g.members[0][0], g.members[0][1], g.name))
    return groups


@dataclass(frozen=True)
class EventHighlight:
    event_index: int
    sentence_index: int
    spans: tuple[Span, ...]


def summarize_document(
    doc: Document,
    events: Sequence[EventMention],
    selection: set[str],
    categories: Mapping[str, str],
    groups: Sequence[ParticipantGroup] | None = None,
) -> dict[str, list[EventHighlight]]:
    """Highlights per selected key (category name or participant name).

    An event is highlighted when its type's category is selected, or when
    a selected participant group contains one of its agent/patient spans.
    """
    if groups is None:
        groups = group_participants(events, doc)
    group_by_name = {g.name: g for g in groups}
    known = set(categories.values()) | set(group_by_name)
    for key in selection:
        if key not in known:
            raise EventLensError(f"unknown selection key: {key}")

    highlights: dict[str, list[EventHighlight]] = {key: [] for key in sorted(selection)}
    for key in sorted(selection):
        group = group_by_name.get(key)
        member_spans = set(group.members) if group is not None else set()
        for index, event in enumerate(events):
            spans: list[Span] = []
            if categories.get(event.event_type) == key:
                spans.extend(event.anchors)
            if group is not None:
                matched = [
                    arg.span
                    for arg in event.arguments
                    if arg.role in (AGENT, PATIENT)
                    and (event.sentence_index, arg.span) in member_spans
                ]
                if matched:
                    spans.extend(event.anchors)
                    spans.extend(matched)
            if spans:
                unique = tuple(sorted(set(spans)))
                highlights[key].append(
                    EventHighlight(index, event.sentence_index, unique)
                )
    return highlights
