import pytest
from hypothesis import given, strategies as st

from eventlens.core import Argument, EventMention, Span, make_document
from eventlens.indexing import (
    BLACK,
    EventIndex,
    FieldValue,
    Gazetteer,
    GazetteerError,
    GREEN,
    IndexedEvent,
    LocationField,
    Query,
    RED,
    TrafficLightThresholds,
    YELLOW,
    append_records,
    index_event,
    score_condition,
    score_event,
    traffic_light,
)
from eventlens.providers import TableCac


class TestGazetteer:
    def test_load_and_expand(self, fixtures_dir):
        gaz = Gazetteer.load(str(fixtures_dir / "gazetteer.tsv"))
        assert gaz.expand("Tehran") == frozenset({"Tehran Province", "Iran"})
        assert gaz.expand("Hanoi") == frozenset({"Vietnam"})
        assert gaz.expand("Nowhere") == frozenset()

    def test_cycle_rejected(self):
        with pytest.raises(GazetteerError, match="cycle"):
            Gazetteer({"A": ["B"], "B": ["C"], "C": ["A"]})

    def test_case_insensitive_lookup(self, fixtures_dir):
        gaz = Gazetteer.load(str(fixtures_dir / "gazetteer.tsv"))
        assert gaz.expand("tehran") == frozenset({"Tehran Province", "Iran"})


class TestIndexEvent:
    def _doc(self, text="A cholera outbreak struck Tehran."):
        return make_document("doc-x", "en", text)

    def test_where_span_expands_countries(self, fixtures_dir):
        gaz = Gazetteer.load(str(fixtures_dir / "gazetteer.tsv"))
        doc = self._doc()
        event = EventMention(
            "Disease-Outbreak",
            (Span(10, 18),),
            (Argument("agent", Span(2, 9), 0.9),),
            0,
            0.95,
            where=Span(26, 32),
            where_confidence=0.8,
        )
        record = index_event(event, doc, gaz, "doc-x#e0")
        assert record.location.text == "Tehran"
        assert record.location.ec == 0.8
        assert record.location.expanded_countries == frozenset(
            {"Tehran Province", "Iran"}
        )
        assert record.agent == FieldValue("cholera", 0.9)

    def test_no_location(self, fixtures_dir):
        gaz = Gazetteer.load(str(fixtures_dir / "gazetteer.tsv"))
        event = EventMention("Disease-Outbreak", (Span(10, 18),), (), 0, 0.95)
        record = index_event(event, self._doc(), gaz, "doc-x#e0")
        assert record.location is None
        assert record.when_text is None

    def test_highest_confidence_argument_wins(self, fixtures_dir):
        gaz = Gazetteer()
        doc = self._doc("alpha beta gamma")
        event = EventMention(
            "Protest",
            (Span(0, 5),),
            (
                Argument("agent", Span(6, 10), 0.4),
                Argument("agent", Span(11, 16), 0.9),
            ),
            0,
            0.9,
        )
        record = index_event(event, doc, gaz, "e")
        assert record.agent == FieldValue("gamma", 0.9)


class TestScoreCondition:
    def test_formula_value(self):
        cac = TableCac({("q", "field"): 0.8, ("q", "sent"): 0.5})
        value = score_condition("q", ("field", 0.9), "sent", cac, beta=0.75)
        assert value == pytest.approx(0.75 * 0.9 * 0.8 + 0.25 * 0.5, abs=1e-12)
        assert value == pytest.approx(0.665, abs=1e-12)

    def test_absent_field_gets_partial_credit(self):
        cac = TableCac({("q", "sent"): 0.4})
        assert score_condition("q", None, "sent", cac) == pytest.approx(0.1, abs=1e-12)

    def test_zero_everywhere(self):
        cac = TableCac({})
        assert score_condition("q", ("field", 1.0), "sent", cac) == 0.0

    def test_beta_extremes(self):
        cac = TableCac({("q", "field"): 0.8, ("q", "sent"): 0.5})
        only_field = score_condition("q", ("field", 1.0), "sent", cac, beta=1.0)
        assert only_field == pytest.approx(0.8, abs=1e-12)
        only_sentence = score_condition("q", ("field", 1.0), "sent", cac, beta=0.0)
        assert only_sentence == pytest.approx(0.5, abs=1e-12)

    @given(
        st.floats(0, 1), st.floats(0, 1), st.floats(0, 1),
        st.floats(0, 1), st.floats(0, 1), st.floats(0, 1),
    )
    def test_monotone_in_every_input(self, ec, cf, cs, d_ec, d_cf, d_cs):
        def value(e, f, s):
            cac = TableCac({("q", "field"): f, ("q", "sent"): s})
            return score_condition("q", ("field", e), "sent", cac)

        base = value(ec, cf, cs)
        assert value(min(ec + d_ec, 1.0), cf, cs) >= base - 1e-12
        assert value(ec, min(cf + d_cf, 1.0), cs) >= base - 1e-12
        assert value(ec, cf, min(cs + d_cs, 1.0)) >= base - 1e-12

    def test_empty_query_text_rejected(self):
        with pytest.raises(ValueError):
            score_condition("", None, "sent", TableCac({}))


class TestTrafficLight:
    def test_absent_field_is_black(self):
        assert traffic_light(0.9, field_present=False) == BLACK

    def test_thresholds(self):
        assert traffic_light(0.665, True) == GREEN
        assert traffic_light(0.3, True) == YELLOW
        assert traffic_light(0.0, True) == RED

    def test_custom_thresholds(self):
        thresholds = TrafficLightThresholds(green=0.9, yellow=0.8)
        assert traffic_light(0.85, True, thresholds) == YELLOW


def _event(event_id="e1", doc_id="d1", etype="Protest", **kwargs):
    defaults = dict(
        sentence_index=0,
        sentence_text="sent",
        agent=None,
        patient=None,
        location=None,
        when_text=None,
        sentence_translation=None,
    )
    defaults.update(kwargs)
    return IndexedEvent(event_id=event_id, doc_id=doc_id, event_type=etype, **defaults)


class TestScoreEvent:
    def test_type_filter(self):
        event = _event(etype="Arrest")
        query = Query(event_types=frozenset({"Protest"}))
        assert score_event(query, event, TableCac({})) is None

    def test_sums_populated_conditions(self):
        cac = TableCac(
            {
                ("cholera", "cholera"): 1.0,
                ("Iran", "Iran"): 1.0,
            }
        )
        event = _event(
            etype="Disease-Outbreak",
            agent=FieldValue("cholera", 0.9),
            location=LocationField("Tehran", 0.8, frozenset({"Iran"})),
        )
        query = Query(agent="cholera", location="Iran")
        total, conditions = score_event(query, event, cac)
        agent_score = 0.75 * 0.9 * 1.0
        location_score = 0.75 * 0.8 * 1.0
        assert total == pytest.approx(agent_score + location_score, abs=1e-12)
        assert [c.condition for c in conditions] == ["agent", "location"]

    def test_context_uses_sentence_term_only(self):
        cac = TableCac({("anti-inflation", "sent"): 0.42})
        event = _event()
        total, conditions = score_event(Query(context="anti-inflation"), event, cac)
        assert total == pytest.approx(0.42, abs=1e-12)
        assert conditions[0].light != BLACK

    def test_location_black_when_field_absent(self):
        cac = TableCac({})
        total, conditions = score_event(Query(location="Iran"), _event(), cac)
        assert conditions[0].light == BLACK

    def test_location_uses_max_over_candidates(self):
        cac = TableCac({("Iran", "Iran"): 1.0, ("Iran", "Tehran"): 0.2})
        event = _event(location=LocationField("Tehran", 1.0, frozenset({"Iran"})))
        total, _ = score_event(Query(location="Iran"), event, cac)
        assert total == pytest.approx(0.75, abs=1e-12)


class TestQueryType:
    def test_requires_a_field(self):
        with pytest.raises(ValueError):
            Query()

    def test_round_trip(self):
        query = Query(event_types=frozenset({"Protest"}), location="Iran")
        assert Query.from_dict(query.to_dict()) == query


class TestEventIndex:
    def _populate(self, index):
        index.add_document("d1", {"document": {"id": "d1"}})
        index.add_event(_event("d1#e0", "d1", agent=FieldValue("cholera", 0.9)))
        index.add_event(_event("d1#e1", "d1", etype="Arrest"))
        index.add_document("d2", {"document": {"id": "d2"}})
        index.add_event(_event("d2#e0", "d2", agent=FieldValue("cholera", 0.5)))

    def test_search_ranks_descending(self):
        index = EventIndex()
        self._populate(index)
        cac = TableCac({("cholera", "cholera"): 1.0})
        results = index.search(Query(agent="cholera"), cac)
        assert [r.event.event_id for r in results] == ["d1#e0", "d2#e0", "d1#e1"]
        assert results[0].total > results[1].total

    def test_tie_broken_by_doc_then_event(self):
        index = EventIndex()
        index.add_event(_event("b#e0", "b"))
        index.add_event(_event("a#e1", "a"))
        index.add_event(_event("a#e0", "a"))
        results = index.search(Query(event_types=frozenset({"Protest"})), TableCac({}))
        assert [r.event.event_id for r in results] == ["a#e0", "a#e1", "b#e0"]

    def test_k_truncates(self):
        index = EventIndex()
        self._populate(index)
        results = index.search(
            Query(agent="cholera"), TableCac({("cholera", "cholera"): 1.0}), k=1
        )
        assert len(results) == 1

    def test_insertion_order_irrelevant(self):
        cac = TableCac({("cholera", "cholera"): 1.0})
        forward, backward = EventIndex(), EventIndex()
        events = [
            _event("d1#e0", "d1", agent=FieldValue("cholera", 0.9)),
            _event("d2#e0", "d2", agent=FieldValue("cholera", 0.5)),
            _event("d3#e0", "d3", agent=FieldValue("cholera", 0.7)),
        ]
        for e in events:
            forward.add_event(e)
        for e in reversed(events):
            backward.add_event(e)
        query = Query(agent="cholera")
        assert [r.event.event_id for r in forward.search(query, cac)] == [
            r.event.event_id for r in backward.search(query, cac)
        ]

    def test_type_filter_is_absolute(self):
        index = EventIndex()
        self._populate(index)
        cac = TableCac({("cholera", "cholera"): 1.0})
        results = index.search(
            Query(event_types=frozenset({"Arrest"}), agent="cholera"), cac
        )
        assert [r.event.event_id for r in results] == ["d1#e1"]

    def test_save_load_round_trip(self, tmp_path):
        index = EventIndex()
        self._populate(index)
        path = str(tmp_path / "events.idx")
        index.save(path)
        loaded = EventIndex.load(path)
        assert len(loaded) == len(index)
        assert loaded.events() == index.events()
        assert loaded.get_document("d1") == {"document": {"id": "d1"}}

    def test_reingest_is_idempotent(self, tmp_path):
        index = EventIndex()
        self._populate(index)
        before = len(index)
        index.add_document("d1", {"document": {"id": "d1"}})
        index.add_event(_event("d1#e0", "d1"))
        index.add_event(_event("d1#e1", "d1", etype="Arrest"))
        assert len(index) == before

    def test_append_records(self, tmp_path):
        index = EventIndex()
        self._populate(index)
        path = str(tmp_path / "events.idx")
        index.save(path)
        append_records(path, "d3", {"document": {"id": "d3"}}, [_event("d3#e0", "d3")])
        loaded = EventIndex.load(path)
        assert len(loaded) == len(index) + 1
        assert loaded.get_document("d3") == {"document": {"id": "d3"}}

    def test_rejects_unversioned_file(self, tmp_path):
        path = tmp_path / "bad.idx"
        path.write_text('{"kind": "event"}\n', encoding="utf-8")
        with pytest.raises(Exception):
            EventIndex.load(str(path))
