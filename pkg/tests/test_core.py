import pytest
from hypothesis import given, strategies as st

from eventlens.core import (
    AGENT,
    Argument,
    CONTAINED,
    CONTAINS,
    DISJOINT,
    EQUAL,
    EventGraph,
    EventMention,
    OVERLAPPING,
    Ontology,
    PATIENT,
    Span,
    load_ontology,
    make_document,
    merge_spans,
    span_relation,
    split_sentences,
)

spans = st.tuples(st.integers(0, 40), st.integers(1, 20)).map(
    lambda t: Span(t[0], t[0] + t[1])
)


class TestSpan:
    def test_rejects_empty_and_negative(self):
        with pytest.raises(ValueError):
            Span(3, 3)
        with pytest.raises(ValueError):
            Span(-1, 4)
        with pytest.raises(ValueError):
            Span(5, 2)

    def test_relation_examples(self):
        assert span_relation(Span(0, 6), Span(0, 6)) == EQUAL
        assert span_relation(Span(0, 6), Span(7, 10)) == DISJOINT
        assert span_relation(Span(0, 6), Span(4, 10)) == OVERLAPPING

    def test_relation_containment(self):
        assert span_relation(Span(0, 10), Span(2, 5)) == CONTAINS
        assert span_relation(Span(2, 5), Span(0, 10)) == CONTAINED
        # touching intervals do not overlap
        assert span_relation(Span(0, 4), Span(4, 8)) == DISJOINT

    @given(spans, spans)
    def test_relation_symmetry(self, a, b):
        forward = span_relation(a, b)
        backward = span_relation(b, a)
        swap = {CONTAINS: CONTAINED, CONTAINED: CONTAINS}
        assert backward == swap.get(forward, forward)

    @given(spans, spans)
    def test_equal_iff_mutual_containment(self, a, b):
        assert (span_relation(a, b) == EQUAL) == (a.contains(b) and b.contains(a))


class TestMergeSpans:
    def test_examples(self):
        assert merge_spans([Span(0, 4), Span(4, 6)]) == [Span(0, 6)]
        assert merge_spans([Span(0, 4)]) == [Span(0, 4)]
        assert merge_spans([Span(0, 4), Span(8, 9), Span(2, 5)]) == [
            Span(0, 5),
            Span(8, 9),
        ]
        assert merge_spans([]) == []

    @given(st.lists(spans, max_size=12))
    def test_idempotent_and_order_independent(self, items):
        merged = merge_spans(items)
        assert merge_spans(merged) == merged
        assert merge_spans(list(reversed(items))) == merged

    @given(st.lists(spans, max_size=12))
    def test_covers_union(self, items):
        merged = merge_spans(items)
        covered = {i for s in merged for i in range(s.start, s.end)}
        expected = {i for s in items for i in range(s.start, s.end)}
        assert covered == expected
        # output spans are disjoint, non-adjacent, and sorted
        for left, right in zip(merged, merged[1:]):
            assert left.end < right.start


class TestSentenceSplitting:
    @pytest.mark.parametrize(
        "text",
        [
            "One sentence.",
            "First. Second! Third?",
            "No terminal punctuation at all",
            "Line one\nline two.",
            "Multi.  Spaced.   End",
            "中文句子。第二句！",
            "سلام؟ خوبی؟",
        ],
    )
    def test_partition_reconstructs_text(self, text):
        pieces = split_sentences(text)
        assert "".join(p for _, p in pieces) == text
        bases = [b for b, _ in pieces]
        assert bases == sorted(set(bases))

    def test_terminal_punctuation_splits(self):
        pieces = split_sentences("First. Second! Third?")
        assert [p.strip() for _, p in pieces] == ["First.", "Second!", "Third?"]

    def test_make_document(self):
        doc = make_document("d1", "en", "Hello there. Bye now.")
        assert [s.index for s in doc.sentences] == [0, 1]
        assert doc.sentences[1].char_base == 13
        with pytest.raises(ValueError):
            make_document("d1", "en", "")


class TestOntology:
    def test_load(self, fixtures_dir):
        ontology = load_ontology(str(fixtures_dir / "ontology.json"))
        assert "Protest" in ontology.event_types
        assert ontology.role_ids[AGENT] == 1
        assert ontology.has_event_arguments
        assert "related-event" not in ontology.span_roles()

    def test_requires_agent_and_patient(self):
        with pytest.raises(ValueError):
            Ontology(frozenset({"X"}), frozenset({AGENT}), {AGENT: 1})

    def test_role_ids_dense_from_one(self):
        with pytest.raises(ValueError):
            Ontology(
                frozenset({"X"}),
                frozenset({AGENT, PATIENT}),
                {AGENT: 1, PATIENT: 3},
            )


class TestEventMention:
    def test_requires_anchor(self):
        with pytest.raises(ValueError):
            EventMention("Protest", (), (), 0, 0.5)

    def test_rejects_overlapping_anchors(self):
        with pytest.raises(ValueError):
            EventMention("Protest", (Span(0, 5), Span(3, 8)), (), 0, 0.5)

    def test_rejects_unsorted_anchors(self):
        with pytest.raises(ValueError):
            EventMention("Protest", (Span(6, 9), Span(0, 5)), (), 0, 0.5)

    def test_confidence_range(self):
        with pytest.raises(ValueError):
            EventMention("Protest", (Span(0, 5),), (), 0, 1.5)
        with pytest.raises(ValueError):
            Argument(AGENT, Span(0, 3), -0.1)

    @given(
        st.lists(
            st.tuples(st.integers(0, 30), st.integers(1, 5)), min_size=1, max_size=6
        )
    )
    def test_random_constructions_hold_invariants(self, raw):
        built = []
        end = 0
        for gap, width in raw:
            start = end + gap
            built.append(Span(start, start + width))
            end = start + width + 1
        event = EventMention("Protest", tuple(built), (), 0, 0.5)
        assert list(event.anchors) == sorted(event.anchors)
        for left, right in zip(event.anchors, event.anchors[1:]):
            assert not left.overlaps(right)


class TestEventGraph:
    def _event(self, start=0):
        return EventMention("Protest", (Span(start, start + 3),), (), 0, 0.9)

    def test_valid_graph(self):
        graph = EventGraph((self._event(0), self._event(5)), ((0, 1),))
        assert len(graph.nodes) == 2

    def test_rejects_self_edge(self):
        with pytest.raises(ValueError):
            EventGraph((self._event(),), ((0, 0),))

    def test_rejects_dangling_edge(self):
        with pytest.raises(ValueError):
            EventGraph((self._event(),), ((0, 3),))
