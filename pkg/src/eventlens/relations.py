"""Event-event relation decoding: same-sentence coreference (multi-anchor
events) and related-event edges, from pairwise classifier scores.

The decoder maximizes the summed scores of the chosen pairwise labels,
subject to coreference being an equivalence relation and coreferent
anchors sharing an event type. Anchors within one class label both
directions of each pair as coreference; a related edge X -> Y labels every
ordered cross pair (i in X, j in Y) as related-event and the reverse
direction as none; at most one direction per class pair. Search is exact
for sentences with up to MAX_EXACT_ANCHORS anchors (every real sentence)
and greedy agglomerative beyond.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .core import Argument, EventGraph, EventMention, Span

LABEL_NONE = "none"
LABEL_RELATED = "related-event"
LABEL_COREF = "coreference"
RELATION_LABELS = (LABEL_NONE, LABEL_RELATED, LABEL_COREF)

MAX_EXACT_ANCHORS = 8


@dataclass(frozen=True)
class PairScores:
    """Classifier scores for every ordered pair of distinct anchors."""

    scores: Mapping[tuple[int, int], Mapping[str, float]]

    def __post_init__(self):
        for pair, labels in self.scores.items():
            if pair[0] == pair[1]:
                raise ValueError(f"self-pair {pair} in relation scores")
            missing = set(RELATION_LABELS) - set(labels)
            if missing:
                raise ValueError(f"pair {pair} missing labels {sorted(missing)}")

    def require_complete(self, n: int) -> None:
        for i in range(n):
            for j in range(n):
                if i != j and (i, j) not in self.scores:
                    raise ValueError(f"missing scores for anchor pair ({i}, {j})")

    def get(self, i: int, j: int, label: str) -> float:
        return self.scores[(i, j)][label]


@dataclass(frozen=True)
class RelationDecode:
    """Coreference classes (anchor indices, each sorted; classes ordered by
    first member) and related edges between class indices."""

    classes: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]


def _pair_none(scores: PairScores, i: int, j: int) -> float:
    return scores.get(i, j, LABEL_NONE) + scores.get(j, i, LABEL_NONE)


def _pair_coref(scores: PairScores, i: int, j: int) -> float:
    return scores.get(i, j, LABEL_COREF) + scores.get(j, i, LABEL_COREF)


def _class_pair_options(
    scores: PairScores, x: Sequence[int], y: Sequence[int]
) -> tuple[float, float, float]:
    """(none, x->y, y->x) totals over all ordered cross pairs."""
    none_total = fwd = bwd = 0.0
    for i in x:
        for j in y:
            n_ij = scores.get(i, j, LABEL_NONE)
            n_ji = scores.get(j, i, LABEL_NONE)
            none_total += n_ij + n_ji
            fwd += scores.get(i, j, LABEL_RELATED) + n_ji
            bwd += n_ij + scores.get(j, i, LABEL_RELATED)
    return none_total, fwd, bwd


def _best_edge(
    scores: PairScores, x: Sequence[int], y: Sequence[int]
) -> tuple[float, int]:
    """Best option for one class pair: (score, direction).

    direction: 0 = no edge, 1 = x->y, 2 = y->x. Ties prefer no edge, then
    the direction whose source class comes first in the text.
    """
    none_total, fwd, bwd = _class_pair_options(scores, x, y)
    best, direction = none_total, 0
    if fwd > best:
        best, direction = fwd, 1
    if bwd > best:
        best, direction = bwd, 2
    return best, direction


def _partition_score(scores: PairScores, classes: Sequence[Sequence[int]]) -> float:
    total = 0.0
    for members in classes:
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                total += _pair_coref(scores, members[a], members[b])
    for x in range(len(classes)):
        for y in range(x + 1, len(classes)):
            total += _best_edge(scores, classes[x], classes[y])[0]
    return total


def _partitions(
    items: Sequence[int], types: Sequence[str]
) -> Iterator[list[list[int]]]:
    """All partitions of items whose blocks are type-consistent."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _partitions(rest, types):
        for block in sub:
            if types[block[0]] == types[first]:
                yield [[first] + block] + [b for b in sub if b is not block]
        yield [[first]] + sub


def _greedy_partition(n: int, types: Sequence[str], scores: PairScores) -> list[list[int]]:
    classes = [[i] for i in range(n)]
    current = _partition_score(scores, classes)
    while True:
        best_gain = 0.0
        best_merge = None
        for a in range(len(classes)):
            for b in range(a + 1, len(classes)):
                if types[classes[a][0]] != types[classes[b][0]]:
                    continue
                candidate = [
                    c for k, c in enumerate(classes) if k not in (a, b)
                ] + [sorted(classes[a] + classes[b])]
                gain = _partition_score(scores, candidate) - current
                if gain > best_gain:
                    best_gain, best_merge = gain, (a, b)
        if best_merge is None:
            return classes
        a, b = best_merge
        merged = sorted(classes[a] + classes[b])
        classes = [c for k, c in enumerate(classes) if k not in (a, b)] + [merged]
        classes.sort(key=lambda c: c[0])
        current += best_gain


def decode_relations(
    anchors: Sequence[tuple[Span, str]], scores: PairScores
) -> RelationDecode:
    """Label all relations in a sentence from pairwise scores.

    Chooses the coreference partition and related edges maximizing the
    summed pairwise label scores (exact up to MAX_EXACT_ANCHORS anchors).
    """
    n = len(anchors)
    if n == 0:
        return RelationDecode((), ())
    scores.require_complete(n)
    types = [etype for _, etype in anchors]

    if n <= MAX_EXACT_ANCHORS:
        best_score = None
        best = None
        for partition in _partitions(list(range(n)), types):
            canonical = sorted((sorted(block) for block in partition), key=lambda b: b[0])
            value = _partition_score(scores, canonical)
            if best_score is None or value > best_score:
                best_score, best = value, canonical
        classes = best
    else:
        classes = _greedy_partition(n, types, scores)

    edges = []
    for x in range(len(classes)):
        for y in range(x + 1, len(classes)):
            _, direction = _best_edge(scores, classes[x], classes[y])
            if direction == 1:
                edges.append((x, y))
            elif direction == 2:
                edges.append((y, x))
    return RelationDecode(
        tuple(tuple(block) for block in classes), tuple(sorted(edges))
    )


def merge_coreferent(
    events: Sequence[EventMention], coref_classes: Sequence[Sequence[int]]
) -> list[EventMention]:
    """Merge single-anchor events into multi-anchor events per class.

    Anchors are unioned (sorted); arguments are de-duplicated on
    (role, span) keeping the higher confidence; event confidence is the
    maximum over members.
    """
    merged = []
    for members in coref_classes:
        group = [events[i] for i in members]
        for event in group:
            if len(event.anchors) != 1:
                raise ValueError("merge_coreferent expects single-anchor events")
        if len({e.event_type for e in group}) != 1:
            raise ValueError("coreference class mixes event types")
        anchors = tuple(sorted(e.anchors[0] for e in group))
        by_key: dict[tuple[str, Span], Argument] = {}
        for event in group:
            for arg in event.arguments:
                key = (arg.role, arg.span)
                if key not in by_key or arg.confidence > by_key[key].confidence:
                    by_key[key] = arg
        arguments = tuple(sorted(by_key.values(), key=lambda a: (a.span, a.role)))
        first = group[0]
        merged.append(
            EventMention(
                event_type=first.event_type,
                anchors=anchors,
                arguments=arguments,
                sentence_index=first.sentence_index,
                anchor_confidence=max(e.anchor_confidence for e in group),
                when=next((e.when for e in group if e.when is not None), None),
                where=next((e.where for e in group if e.where is not None), None),
                when_confidence=next(
                    (e.when_confidence for e in group if e.when_confidence is not None),
                    None,
                ),
                where_confidence=next(
                    (e.where_confidence for e in group if e.where_confidence is not None),
                    None,
                ),
            )
        )
    return merged


def build_event_graph(
    events: Sequence[EventMention], related_edges: Sequence[tuple[int, int]]
) -> EventGraph:
    """Display graph over merged events; edges carry the related-event label."""
    return EventGraph(nodes=tuple(events), edges=tuple(related_edges))
