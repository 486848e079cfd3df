"""Corpus ingestion and the versioned HTTP API.

Extraction responses return immediately; translation (plus span
projection) runs on a background queue and is fetched by job id once its
status flips to done — mirroring how a slow MT backend is deployed. The
rest of the API is synchronous over the in-memory index.
"""

from __future__ import annotations

import json
import logging
import queue
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Query as QueryParam
from pydantic import BaseModel

from .config import AppContext
from .core import EventLensError, PipelineError, make_document
from .indexing import EventIndex, Query, index_event
from .pipeline import DocumentResult, Pipeline
from .queries import nl_to_query, parse_structured
from .schema import (
    document_result_to_dict,
    event_from_dict,
    search_results_to_dict,
    translation_to_dict,
)
from .summarize import group_participants, summarize_document

logger = logging.getLogger(__name__)

PENDING = "pending"
DONE = "done"
UNAVAILABLE = "unavailable"


@dataclass
class IngestReport:
    documents: int = 0
    events: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "documents": self.documents,
            "events": self.events,
            "failures": [{"where": w, "error": e} for w, e in self.failures],
        }


def extract_and_index(
    result: DocumentResult, context: AppContext, index: EventIndex, translate: bool = True
) -> int:
    """Index one extraction result; returns the number of events indexed."""
    doc = result.document
    translations: dict[int, str] = {}
    if translate and not getattr(context.registry.translation, "unavailable", False):
        translated = context.pipeline.translate_document(result)
        translations = {s.sentence_index: s.translation for s in translated.sentences}
    index.add_document(doc.id, document_result_to_dict(result))
    count = 0
    for ordinal, event in enumerate(result.all_events()):
        record = index_event(
            event,
            doc,
            context.gazetteer,
            event_id=f"{doc.id}#e{ordinal}",
            translation=translations.get(event.sentence_index),
        )
        index.add_event(record)
        count += 1
    return count


def ingest_corpus(path: str, context: AppContext, index: EventIndex) -> IngestReport:
    """Ingest a corpus file: one JSON document per line {id, language, text}.

    Per-document failures are recorded and skipped; only an unreadable
    file aborts the run.
    """
    report = IngestReport()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                doc_id = str(record["id"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                report.failures.append((f"{path}:{lineno}", f"bad document record: {exc}"))
                continue
            try:
                doc = make_document(
                    doc_id, str(record.get("language", "und")), str(record["text"]),
                    context.pipeline.splitter,
                )
                result = context.pipeline.extract_document(doc)
                report.events += extract_and_index(result, context, index)
                report.documents += 1
            except (EventLensError, PipelineError, KeyError, ValueError) as exc:
                report.failures.append((doc_id, str(exc)))
    return report


class ExtractRequest(BaseModel):
    text: str = ""
    language: str = "en"


class SearchRequest(BaseModel):
    nl: str | None = None
    query: dict | None = None
    k: int = 20


@dataclass
class TranslationJob:
    status: str
    result: dict | None = None


class JobStore:
    """Background translation jobs with at-least-once completion."""

    def __init__(self, pipeline: Pipeline, unavailable: bool):
        self.pipeline = pipeline
        self.unavailable = unavailable
        self.jobs: dict[str, TranslationJob] = {}
        self._lock = threading.Lock()
        self._queue: queue.Queue = queue.Queue()
        self._worker = threading.Thread(target=self._run, daemon=True)
        self._worker.start()

    def submit(self, result: DocumentResult) -> tuple[str, str]:
        job_id = uuid.uuid4().hex
        status = UNAVAILABLE if self.unavailable else PENDING
        with self._lock:
            self.jobs[job_id] = TranslationJob(status)
        if status == PENDING:
            self._queue.put((job_id, result))
        return job_id, status

    def get(self, job_id: str) -> TranslationJob | None:
        with self._lock:
            return self.jobs.get(job_id)

    def _run(self) -> None:
        while True:
            job_id, result = self._queue.get()
            try:
                translation = self.pipeline.translate_document(result)
                payload = translation_to_dict(translation)
                payload["status"] = DONE
                with self._lock:
                    self.jobs[job_id] = TranslationJob(DONE, payload)
            except Exception as exc:
                logger.exception("translation job %s failed", job_id)
                with self._lock:
                    self.jobs[job_id] = TranslationJob(UNAVAILABLE, None)
            finally:
                self._queue.task_done()


def create_app(context: AppContext, index: EventIndex | None = None) -> FastAPI:
    app = FastAPI(title="eventlens", version="0.1.0")
    app.state.index = index if index is not None else EventIndex()
    translation_unavailable = getattr(context.registry.translation, "unavailable", False)
    app.state.jobs = JobStore(context.pipeline, translation_unavailable)
    app.state.extractions: dict[str, DocumentResult] = {}

    @app.get("/v1/healthz")
    def healthz():
        return {"status": "ok", "providers": context.registry.provenance()}

    @app.post("/v1/extract")
    def extract(request: ExtractRequest):
        if not request.text.strip():
            raise HTTPException(status_code=400, detail="empty text")
        if (
            context.supported_languages is not None
            and request.language.split("-")[0].lower() not in context.supported_languages
        ):
            raise HTTPException(
                status_code=422, detail=f"unsupported language: {request.language}"
            )
        try:
            result = context.pipeline.extract(request.text, language=request.language)
        except PipelineError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        job_id, status = app.state.jobs.submit(result)
        payload = document_result_to_dict(result)
        payload["translation_status"] = status
        payload["translation_job"] = job_id
        return payload

    @app.get("/v1/extract/{job_id}/translation")
    def translation(job_id: str):
        job = app.state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail="unknown translation job")
        if job.status != DONE:
            return {"status": job.status}
        return job.result

    @app.post("/v1/search")
    def search(request: SearchRequest):
        try:
            if request.nl is not None:
                query = nl_to_query(
                    request.nl, context.pipeline, context.ontology, context.stopwords
                )
            elif request.query is not None:
                query = parse_structured(request.query, context.ontology)
            else:
                raise EventLensError("search request needs `nl` or `query`")
        except (EventLensError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        results = app.state.index.search(
            query,
            context.registry.cac,
            k=request.k,
            beta=context.beta,
            thresholds=context.thresholds,
        )
        return search_results_to_dict(results, query.to_dict())

    @app.get("/v1/documents/{doc_id}")
    def get_document(doc_id: str):
        record = app.state.index.get_document(doc_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown document: {doc_id}")
        return record

    @app.get("/v1/documents/{doc_id}/summary")
    def summary(doc_id: str, select: list[str] = QueryParam(default=[])):
        record = app.state.index.get_document(doc_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown document: {doc_id}")
        doc = make_document(
            record["document"]["id"],
            record["document"]["language"],
            record["document"]["text"],
            context.pipeline.splitter,
        )
        events = [
            event_from_dict(e) for s in record["sentences"] for e in s["events"]
        ]
        groups = group_participants(events, doc)
        try:
            highlights = summarize_document(
                doc, events, set(select), context.categories, groups
            )
        except EventLensError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return {
            "doc_id": doc_id,
            "categories": sorted(
                {
                    context.categories[e.event_type]
                    for e in events
                    if e.event_type in context.categories
                }
            ),
            "participants": [
                {"name": g.name, "members": len(g.members)} for g in groups
            ],
            "highlights": {
                key: [
                    {
                        "event_index": h.event_index,
                        "sentence_index": h.sentence_index,
                        "spans": [{"start": s.start, "end": s.end} for s in h.spans],
                    }
                    for h in items
                ]
                for key, items in highlights.items()
            },
        }

    return app
