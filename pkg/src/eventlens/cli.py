"""Command-line interface: extract, index, search, eval, serve."""

from __future__ import annotations

import json
import sys

import click

from .config import load_context
from .core import EventLensError
from .evaluation import score_anchors, score_arguments, score_coref
from .indexing import EventIndex
from .queries import nl_to_query, parse_structured
from .schema import document_result_to_dict, events_by_document
from .service import create_app, ingest_corpus


@click.group()
def main():
    """Cross-lingual event extraction and event-centric search."""


def _dump(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, ensure_ascii=False, sort_keys=True)
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        click.echo(text)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--config", "-c", "config_path", required=True, type=click.Path(exists=True))
@click.option("--language", default="en", help="BCP-47 code of the input text.")
@click.option("--doc-id", default=None)
@click.option("--corpus", is_flag=True, help="Treat FILE as a JSONL corpus; emit JSONL.")
@click.option("--output", "-o", default=None)
def extract(file, config_path, language, doc_id, corpus, output):
    """Run the extraction pipeline over a text file (or corpus)."""
    context = load_context(config_path)
    if corpus:
        lines = []
        with open(file, encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                record = json.loads(line)
                result = context.pipeline.extract(
                    record["text"],
                    doc_id=str(record["id"]),
                    language=record.get("language", "und"),
                )
                lines.append(
                    json.dumps(
                        document_result_to_dict(result), ensure_ascii=False, sort_keys=True
                    )
                )
        text = "\n".join(lines) + "\n"
        if output:
            with open(output, "w", encoding="utf-8") as f:
                f.write(text)
        else:
            click.echo(text, nl=False)
        return
    with open(file, encoding="utf-8") as f:
        text = f.read()
    result = context.pipeline.extract(text, doc_id=doc_id or file, language=language)
    _dump(document_result_to_dict(result), output)


@main.command()
@click.argument("corpus", type=click.Path(exists=True))
@click.option("--output", "-o", required=True, type=click.Path())
@click.option("--config", "-c", "config_path", required=True, type=click.Path(exists=True))
def index(corpus, output, config_path):
    """Ingest a JSONL corpus ({id, language, text} per line) into an index."""
    context = load_context(config_path)
    event_index = EventIndex()
    report = ingest_corpus(corpus, context, event_index)
    event_index.save(output)
    click.echo(json.dumps(report.to_dict(), ensure_ascii=False))
    if report.failures:
        sys.exit(1)


@main.command()
@click.argument("index_path", type=click.Path(exists=True))
@click.option("--config", "-c", "config_path", required=True, type=click.Path(exists=True))
@click.option("--nl", default=None, help="Natural-language query.")
@click.option("--type", "types", multiple=True, help="Event type filter (repeatable).")
@click.option("--agent", default=None)
@click.option("--patient", default=None)
@click.option("--location", default=None)
@click.option("--context", "context_words", default=None)
@click.option("-k", "top_k", default=20, show_default=True)
def search(index_path, config_path, nl, types, agent, patient, location, context_words, top_k):
    """Search an index with a structured or natural-language query."""
    app_context = load_context(config_path)
    event_index = EventIndex.load(index_path)
    try:
        if nl:
            query = nl_to_query(nl, app_context.pipeline, app_context.ontology, app_context.stopwords)
        else:
            query = parse_structured(
                {
                    "event_types": list(types),
                    "agent": agent,
                    "patient": patient,
                    "location": location,
                    "context": context_words,
                },
                app_context.ontology,
            )
    except EventLensError as exc:
        raise click.ClickException(str(exc)) from exc
    results = event_index.search(
        query,
        app_context.registry.cac,
        k=top_k,
        beta=app_context.beta,
        thresholds=app_context.thresholds,
    )
    click.echo(json.dumps(query.to_dict(), ensure_ascii=False, sort_keys=True))
    for rank, result in enumerate(results, 1):
        lights = " ".join(f"{c.condition}={c.light}" for c in result.conditions)
        click.echo(
            f"{rank:3d}. {result.total:8.4f}  {result.event.event_id}  "
            f"[{result.event.event_type}]  {lights}"
        )
        click.echo(f"     {result.event.sentence_text.strip()}")


@main.command("eval")
@click.argument("pred", type=click.Path(exists=True))
@click.argument("gold", type=click.Path(exists=True))
@click.option(
    "--task",
    type=click.Choice(["anchors", "arguments", "coref"]),
    required=True,
)
@click.option("--require-anchor-match", is_flag=True, help="Arguments must also match anchor offsets.")
def eval_command(pred, gold, task, require_anchor_match):
    """Score a prediction file against gold (both in the extraction schema, JSONL)."""

    def load(path):
        with open(path, encoding="utf-8") as f:
            return [json.loads(line) for line in f if line.strip()]

    pred_events = events_by_document(load(pred))
    gold_events = events_by_document(load(gold))
    try:
        if task == "anchors":
            scores = score_anchors(pred_events, gold_events)
        elif task == "arguments":
            scores = score_arguments(pred_events, gold_events, require_anchor_match)
        else:
            scores = score_coref(
                _coref_classes(pred_events), _coref_classes(gold_events)
            )
    except EventLensError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"{'task':<12}{'P':>9}{'R':>9}{'F1':>9}")
    click.echo(
        f"{task:<12}{scores.precision:>9.4f}{scores.recall:>9.4f}{scores.f1:>9.4f}"
    )


def _coref_classes(events_by_doc):
    classes = []
    for doc_id, events in sorted(events_by_doc.items()):
        for event in events:
            classes.append(
                [(doc_id, event.sentence_index, a.start, a.end) for a in event.anchors]
            )
    return classes


@main.command()
@click.option("--index", "index_path", default=None, type=click.Path(exists=True))
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--config", "-c", "config_path", required=True, type=click.Path(exists=True))
def serve(index_path, port, host, config_path):
    """Run the HTTP service."""
    import uvicorn

    context = load_context(config_path)
    event_index = EventIndex.load(index_path) if index_path else EventIndex()
    uvicorn.run(create_app(context, event_index), host=host, port=port)


if __name__ == "__main__":
    main()
