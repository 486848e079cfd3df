import pytest

from eventlens.core import Argument, EventLensError, EventMention, Span, make_document
from eventlens.summarize import (
    EventHighlight,
    group_participants,
    load_category_table,
    summarize_document,
)


def doc_and_events():
    #          0         1         2         3         4         5
    #          0123456789012345678901234567890123456789012345678901234
    text = "Russia attacked the port. Later russia shelled the city."
    doc = make_document("d", "en", text)
    attack = EventMention(
        "Attack",
        (Span(7, 15),),
        (Argument("agent", Span(0, 6), 0.9),),
        0,
        0.9,
    )
    shelling = EventMention(
        "Attack",
        (Span(13, 20),),  # "shelled" within sentence 1
        (Argument("agent", Span(6, 12), 0.8),),  # "russia"
        1,
        0.8,
    )
    return doc, [attack, shelling]


class TestGroupParticipants:
    def test_case_insensitive_grouping(self):
        doc, events = doc_and_events()
        groups = group_participants(events, doc)
        assert len(groups) == 1
        assert groups[0].name == "Russia"
        assert len(groups[0].members) == 2

    def test_token_subsequence_merges(self):
        text = "Putin spoke. Vladimir Putin left."
        doc = make_document("d", "en", text)
        events = [
            EventMention(
                "Communicate", (Span(6, 11),), (Argument("agent", Span(0, 5), 0.9),), 0, 0.9
            ),
            EventMention(
                "Communicate",
                (Span(15, 19),),
                (Argument("agent", Span(0, 14), 0.9),),
                1,
                0.9,
            ),
        ]
        groups = group_participants(events, doc)
        assert len(groups) == 1
        assert groups[0].name == "Vladimir Putin"

    def test_no_arguments(self):
        doc = make_document("d", "en", "Nothing here.")
        assert group_participants([], doc) == []

    def test_partition_property(self):
        doc, events = doc_and_events()
        groups = group_participants(events, doc)
        seen = [m for g in groups for m in g.members]
        assert len(seen) == len(set(seen))
        all_spans = {
            (e.sentence_index, a.span)
            for e in events
            for a in e.arguments
            if a.role in ("agent", "patient")
        }
        assert set(seen) == all_spans

    def test_display_text_override(self):
        doc, events = doc_and_events()
        texts = {
            (0, Span(0, 6)): "Russian Federation",
            (1, Span(6, 12)): "Russian Federation",
        }
        groups = group_participants(events, doc, texts)
        assert groups[0].name == "Russian Federation"


class TestSummarizeDocument:
    def test_participant_selection_highlights_events(self, fixtures_dir):
        doc, events = doc_and_events()
        categories = load_category_table(str(fixtures_dir / "categories.tsv"))
        highlights = summarize_document(doc, events, {"Russia"}, categories)
        assert len(highlights["Russia"]) == 2
        first = highlights["Russia"][0]
        assert isinstance(first, EventHighlight)
        assert Span(0, 6) in first.spans  # the matching agent span
        assert Span(7, 15) in first.spans  # the anchor

    def test_empty_selection(self, fixtures_dir):
        doc, events = doc_and_events()
        categories = load_category_table(str(fixtures_dir / "categories.tsv"))
        assert summarize_document(doc, events, set(), categories) == {}

    def test_category_selection(self, fixtures_dir):
        doc, events = doc_and_events()
        categories = load_category_table(str(fixtures_dir / "categories.tsv"))
        highlights = summarize_document(doc, events, {"Military"}, categories)
        assert len(highlights["Military"]) == 2

    def test_unknown_key_rejected(self, fixtures_dir):
        doc, events = doc_and_events()
        categories = load_category_table(str(fixtures_dir / "categories.tsv"))
        with pytest.raises(EventLensError, match="unknown selection key"):
            summarize_document(doc, events, {"Nonsense"}, categories)

    def test_output_spans_come_from_events(self, fixtures_dir):
        doc, events = doc_and_events()
        categories = load_category_table(str(fixtures_dir / "categories.tsv"))
        highlights = summarize_document(doc, events, {"Russia", "Military"}, categories)
        event_spans = {
            (e.sentence_index, s)
            for e in events
            for s in list(e.anchors) + [a.span for a in e.arguments]
        }
        for items in highlights.values():
            for h in items:
                for span in h.spans:
                    assert (h.sentence_index, span) in event_spans
