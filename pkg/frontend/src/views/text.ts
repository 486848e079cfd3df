/**
 * Text view: per-sentence event rendering with anchor/argument/when/where
 * highlights, side by side with the machine translation and its projected
 * spans once the background translation finishes.
 */

import {
  EventRecord,
  ExtractionResult,
  Projection,
  TranslationResult,
} from "../api.js";
import { Mark, escapeHtml, renderMarked } from "../highlight.js";

function eventMarks(event: EventRecord): Mark[] {
  const marks: Mark[] = [];
  for (const anchor of event.anchors) {
    marks.push({
      start: anchor.start,
      end: anchor.end,
      cssClass: "anchor",
      title: event.event_type,
    });
  }
  for (const argument of event.arguments) {
    marks.push({
      start: argument.start,
      end: argument.end,
      cssClass: `argument role-${argument.role}`,
      title: argument.role,
    });
  }
  if (event.when) {
    marks.push({ start: event.when.start, end: event.when.end, cssClass: "when", title: "when" });
  }
  if (event.where) {
    marks.push({ start: event.where.start, end: event.where.end, cssClass: "where", title: "where" });
  }
  return marks;
}

function projectionMarks(projections: Projection[]): Mark[] {
  const marks: Mark[] = [];
  for (const projection of projections) {
    if (!projection.target) continue;
    const cssClass =
      projection.kind === "argument"
        ? `argument role-${projection.role ?? ""}`
        : projection.kind;
    marks.push({
      start: projection.target.start,
      end: projection.target.end,
      cssClass,
      title: projection.role ?? projection.kind,
    });
  }
  return marks;
}

function eventCaption(event: EventRecord): string {
  const anchors = event.anchors.map((a) => escapeHtml(a.text ?? "")).join(" * ");
  const args = event.arguments
    .map((a) => `${escapeHtml(a.role)}: ${escapeHtml(a.text ?? "")}`)
    .join("; ");
  const extras: string[] = [];
  if (event.when?.text) extras.push(`when: ${escapeHtml(event.when.text)}`);
  if (event.where?.text) extras.push(`where: ${escapeHtml(event.where.text)}`);
  const tail = [args, extras.join("; ")].filter(Boolean).join("; ");
  return `<li class="event"><span class="event-type">${escapeHtml(event.event_type)}</span> ${anchors}${tail ? " — " + tail : ""}</li>`;
}

export function textView(
  extraction: ExtractionResult,
  translation?: TranslationResult,
): string {
  const translated = new Map(
    (translation?.sentences ?? []).map((s) => [s.sentence_index, s]),
  );
  const parts: string[] = ['<div class="text-view">'];
  const stillPending =
    extraction.translation_status === "pending" && translation?.status !== "done";
  if (stillPending) {
    parts.push(
      '<p class="translation-pending" role="status">Translation pending — refresh to see English projections.</p>',
    );
  }
  for (const sentence of extraction.sentences) {
    if (!sentence.text.trim()) continue;
    const marks = sentence.events.flatMap(eventMarks);
    parts.push(`<section class="sentence" data-index="${sentence.index}">`);
    parts.push(`<p class="source" lang="${escapeHtml(extraction.document.language)}">`);
    parts.push(renderMarked(sentence.text, marks));
    parts.push("</p>");
    const t = translated.get(sentence.index);
    if (t && t.translation.trim()) {
      parts.push('<p class="translation" lang="en">');
      parts.push(renderMarked(t.translation, projectionMarks(t.projections)));
      parts.push("</p>");
    }
    if (sentence.events.length) {
      parts.push('<ul class="events">');
      for (const event of sentence.events) parts.push(eventCaption(event));
      parts.push("</ul>");
    }
    parts.push("</section>");
  }
  parts.push("</div>");
  return parts.join("\n");
}
