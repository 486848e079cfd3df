"""Scoring harness: micro-averaged P/R/F1 for anchors, arguments, and
same-sentence event coreference.

Matching is exact: an anchor is correct when its offsets and event type
match; an argument additionally matches on role (and optionally on anchor
offsets, for ontologies without event types). Coreference is scored over
unordered anchor pairs that share a class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Collection, Hashable, Mapping, Sequence

from .core import EventLensError, EventMention


@dataclass(frozen=True)
class Scores:
    precision: float
    recall: float
    f1: float


def _prf(tp: int, n_pred: int, n_gold: int) -> Scores:
    # 0/0 counts as perfect only when both sides are empty.
    if n_pred == 0:
        precision = 1.0 if n_gold == 0 else 0.0
    else:
        precision = tp / n_pred
    if n_gold == 0:
        recall = 1.0 if n_pred == 0 else 0.0
    else:
        recall = tp / n_gold
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return Scores(precision, recall, f1)


def _check_documents(pred: Mapping[str, object], gold: Mapping[str, object]) -> None:
    if set(pred) != set(gold):
        missing = sorted(set(gold) - set(pred))
        extra = sorted(set(pred) - set(gold))
        raise EventLensError(
            f"document mismatch between pred and gold (missing={missing}, extra={extra})"
        )


def _multiset_tp(pred: Counter, gold: Counter) -> int:
    return sum((pred & gold).values())


def score_anchors(
    pred: Mapping[str, Sequence[EventMention]],
    gold: Mapping[str, Sequence[EventMention]],
) -> Scores:
    """Anchor instances match on (sentence, offsets, event type)."""
    _check_documents(pred, gold)

    def instances(events_by_doc: Mapping[str, Sequence[EventMention]]) -> Counter:
        keys: Counter = Counter()
        for doc_id, events in events_by_doc.items():
            for event in events:
                for anchor in event.anchors:
                    keys[(doc_id, event.sentence_index, anchor, event.event_type)] += 1
        return keys

    p, g = instances(pred), instances(gold)
    return _prf(_multiset_tp(p, g), sum(p.values()), sum(g.values()))


def score_arguments(
    pred: Mapping[str, Sequence[EventMention]],
    gold: Mapping[str, Sequence[EventMention]],
    require_anchor_match: bool = False,
) -> Scores:
    """Argument instances match on (sentence, offsets, event type, role);
    with ``require_anchor_match`` the event's anchor offsets must match
    too (used for ontologies whose events carry no type)."""
    _check_documents(pred, gold)

    def instances(events_by_doc: Mapping[str, Sequence[EventMention]]) -> Counter:
        keys: Counter = Counter()
        for doc_id, events in events_by_doc.items():
            for event in events:
                anchor_key = tuple(event.anchors) if require_anchor_match else None
                for arg in event.arguments:
                    keys[
                        (
                            doc_id,
                            event.sentence_index,
                            arg.span,
                            event.event_type,
                            arg.role,
                            anchor_key,
                        )
                    ] += 1
        return keys

    p, g = instances(pred), instances(gold)
    return _prf(_multiset_tp(p, g), sum(p.values()), sum(g.values()))


def _links(classes: Sequence[Collection[Hashable]]) -> set[frozenset]:
    links = set()
    for members in classes:
        for a, b in combinations(sorted(members, key=repr), 2):
            links.add(frozenset((a, b)))
    return links


def score_coref(
    pred_classes: Sequence[Collection[Hashable]],
    gold_classes: Sequence[Collection[Hashable]],
) -> Scores:
    """Pairwise-link P/R/F1 over coreference partitions.

    Both partitions must cover the same anchor universe.
    """
    pred_universe = {a for members in pred_classes for a in members}
    gold_universe = {a for members in gold_classes for a in members}
    for anchor in sorted(pred_universe - gold_universe, key=repr):
        raise EventLensError(f"anchor {anchor!r} present in pred but not in gold")
    for anchor in sorted(gold_universe - pred_universe, key=repr):
        raise EventLensError(f"anchor {anchor!r} present in gold but not in pred")

    pred_links = _links(pred_classes)
    gold_links = _links(gold_classes)
    tp = len(pred_links & gold_links)
    return _prf(tp, len(pred_links), len(gold_links))
