"""End-to-end extraction pipeline: tokenize, anchors, arguments,
relations, when/where — then (separately) translation with span
projection.

The pipeline owns no model state; every learned component comes from the
provider registry. Given fixed providers, output is byte-identical across
runs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .alignment import (
    DEFAULT_ALPHA,
    DEFAULT_ITERATIONS,
    itermax,
    pool_subwords_to_words,
    project_span,
    similarity_matrix,
)
from .core import (
    Document,
    EventGraph,
    EventMention,
    Ontology,
    PipelineError,
    Sentence,
    SentenceSplitter,
    Span,
    make_document,
)
from .extraction import extract_anchors, extract_arguments, extract_when_where
from .providers import ProviderRegistry
from .relations import build_event_graph, decode_relations, merge_coreferent
from .tokenization import (
    DEFAULT_SCRIPTIO_CONTINUA,
    LabelStats,
    WHITESPACE_DELIMITED,
    language_class,
    tokenize,
)


@dataclass(frozen=True)
class SentenceExtraction:
    sentence: Sentence
    events: tuple[EventMention, ...]
    related_edges: tuple[tuple[int, int], ...]  # indices into this sentence's events


@dataclass(frozen=True)
class DocumentResult:
    document: Document
    sentences: tuple[SentenceExtraction, ...]
    graph: EventGraph
    providers: dict[str, str]

    def all_events(self) -> list[EventMention]:
        return [event for s in self.sentences for event in s.events]


@dataclass(frozen=True)
class SpanProjection:
    """One event field carried into the translation; target is None when
    no token under the source span is aligned."""

    event_index: int  # document-level event ordinal
    kind: str  # anchor | argument | when | where
    role: str | None
    source: Span
    target: Span | None


@dataclass(frozen=True)
class SentenceTranslation:
    sentence_index: int
    translation: str
    projections: tuple[SpanProjection, ...]


@dataclass(frozen=True)
class DocumentTranslation:
    doc_id: str
    sentences: tuple[SentenceTranslation, ...]


class Pipeline:
    def __init__(
        self,
        ontology: Ontology,
        registry: ProviderRegistry,
        label_stats: LabelStats,
        scriptio_continua: frozenset[str] = DEFAULT_SCRIPTIO_CONTINUA,
        itermax_iterations: int = DEFAULT_ITERATIONS,
        itermax_alpha: float = DEFAULT_ALPHA,
        splitter: SentenceSplitter | None = None,
    ):
        self.ontology = ontology
        self.registry = registry
        self.label_stats = label_stats
        self.scriptio_continua = scriptio_continua
        self.itermax_iterations = itermax_iterations
        self.itermax_alpha = itermax_alpha
        self.splitter = splitter or SentenceSplitter()

    def extract(self, text: str, doc_id: str = "adhoc", language: str = "en") -> DocumentResult:
        doc = make_document(doc_id, language, text, self.splitter)
        return self.extract_document(doc)

    def extract_document(self, doc: Document) -> DocumentResult:
        lang_class = language_class(doc.language, self.scriptio_continua)
        extractions = []
        for sentence in doc.sentences:
            if not sentence.text.strip():
                extractions.append(SentenceExtraction(sentence, (), ()))
                continue
            extractions.append(self._extract_sentence(sentence, lang_class))

        nodes: list[EventMention] = []
        edges: list[tuple[int, int]] = []
        for extraction in extractions:
            offset = len(nodes)
            nodes.extend(extraction.events)
            edges.extend((offset + a, offset + b) for a, b in extraction.related_edges)
        graph = build_event_graph(nodes, edges)
        return DocumentResult(
            document=doc,
            sentences=tuple(extractions),
            graph=graph,
            providers=self.registry.provenance(),
        )

    def _extract_sentence(self, sentence: Sentence, lang_class: str) -> SentenceExtraction:
        registry = self.registry
        tokens = tokenize(sentence, registry.subword_tokenizer, lang_class)
        try:
            anchors = extract_anchors(
                sentence, tokens, registry.anchor_scorer, self.label_stats, lang_class
            )
            events = []
            for span, etype, confidence in anchors:
                event = EventMention(
                    event_type=etype,
                    anchors=(span,),
                    arguments=(),
                    sentence_index=sentence.index,
                    anchor_confidence=confidence,
                )
                arguments = extract_arguments(
                    sentence, tokens, event, self.ontology, registry.argument_scorer, lang_class
                )
                events.append(replace(event, arguments=tuple(arguments)))

            if len(events) > 1:
                pair_scores = registry.pair_scorer.score_pairs(
                    [sentence.slice(e.first_anchor) for e in events],
                    [e.event_type for e in events],
                    sentence,
                )
                decoded = decode_relations(
                    [(e.first_anchor, e.event_type) for e in events], pair_scores
                )
                merged = merge_coreferent(events, decoded.classes)
                edges = decoded.edges
            else:
                merged, edges = events, ()

            final = []
            for event in merged:
                answers = extract_when_where(
                    sentence, tokens, event, registry.qa_scorer, lang_class
                )
                final.append(
                    replace(
                        event,
                        when=answers.when,
                        where=answers.where,
                        when_confidence=answers.when_confidence,
                        where_confidence=answers.where_confidence,
                    )
                )
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(
                f"extraction failed in sentence {sentence.index}: {exc}", sentence.index
            ) from exc
        return SentenceExtraction(sentence, tuple(final), tuple(edges))

    def translate_document(self, result: DocumentResult) -> DocumentTranslation:
        """Translate every sentence and project event spans into it."""
        doc = result.document
        lang_class = language_class(doc.language, self.scriptio_continua)
        registry = self.registry
        sentences = []
        event_offset = 0
        for extraction in result.sentences:
            sentence = extraction.sentence
            if not sentence.text.strip():
                sentences.append(SentenceTranslation(sentence.index, "", ()))
                continue
            translation = registry.translation.translate(sentence.text, doc.language)
            projections: list[SpanProjection] = []
            if translation.strip() and extraction.events:
                projections = self._project_sentence(
                    sentence, extraction.events, translation, lang_class, event_offset
                )
            sentences.append(
                SentenceTranslation(sentence.index, translation, tuple(projections))
            )
            event_offset += len(extraction.events)
        return DocumentTranslation(doc.id, tuple(sentences))

    def _project_sentence(
        self,
        sentence: Sentence,
        events: Sequence[EventMention],
        translation: str,
        lang_class: str,
        event_offset: int,
    ) -> list[SpanProjection]:
        registry = self.registry
        src_tokens = tokenize(sentence, registry.subword_tokenizer, lang_class)
        tgt_sentence = Sentence(index=sentence.index, text=translation, char_base=0)
        tgt_tokens = tokenize(tgt_sentence, registry.subword_tokenizer, WHITESPACE_DELIMITED)

        src_vectors = registry.embeddings.vectors([t.text for t in src_tokens])
        tgt_vectors = registry.embeddings.vectors([t.text for t in tgt_tokens])
        src_units, src_pooled = pool_subwords_to_words(src_tokens, src_vectors)
        tgt_units, tgt_pooled = pool_subwords_to_words(tgt_tokens, tgt_vectors)
        matrix = similarity_matrix(
            src_pooled,
            tgt_pooled,
            [u.text for u in src_units],
            [u.text for u in tgt_units],
        )
        alignment = itermax(matrix, self.itermax_iterations, self.itermax_alpha)

        def project(index: int, kind: str, role: str | None, span: Span) -> SpanProjection:
            target = project_span(span, src_units, tgt_units, alignment)
            return SpanProjection(index, kind, role, span, target)

        projections = []
        for local, event in enumerate(events):
            index = event_offset + local
            for anchor in event.anchors:
                projections.append(project(index, "anchor", None, anchor))
            for argument in event.arguments:
                projections.append(project(index, "argument", argument.role, argument.span))
            if event.when is not None:
                projections.append(project(index, "when", None, event.when))
            if event.where is not None:
                projections.append(project(index, "where", None, event.where))
        return projections
