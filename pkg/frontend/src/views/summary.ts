/**
 * Summary view: category and participant chips; selecting chips highlights
 * the matching events in the source text (and in the translation where
 * spans project).
 */

import { ExtractionResult, SummaryResponse } from "../api.js";
import { Mark, escapeHtml, renderMarked } from "../highlight.js";

function chip(kind: string, name: string, selected: boolean, enabled: boolean): string {
  const classes = ["chip", `chip-${kind}`];
  if (selected) classes.push("selected");
  if (!enabled) classes.push("disabled");
  const disabled = enabled ? "" : " disabled";
  return (
    `<button class="${classes.join(" ")}" data-kind="${kind}" data-key="${escapeHtml(name)}"${disabled}>` +
    escapeHtml(name) +
    "</button>"
  );
}

export function summaryView(
  document: ExtractionResult,
  summary: SummaryResponse,
  selection: Set<string>,
): string {
  const known = new Set([
    ...summary.categories,
    ...summary.participants.map((p) => p.name),
  ]);
  const parts: string[] = ['<div class="summary-view">'];

  parts.push('<div class="chips">');
  for (const category of summary.categories) {
    parts.push(chip("category", category, selection.has(category), true));
  }
  for (const participant of summary.participants) {
    parts.push(chip("participant", participant.name, selection.has(participant.name), true));
  }
  // unknown selections render as disabled chips instead of breaking the view
  for (const key of Array.from(selection).sort()) {
    if (!known.has(key)) parts.push(chip("unknown", key, false, false));
  }
  parts.push("</div>");

  const marksBySentence = new Map<number, Mark[]>();
  for (const [key, items] of Object.entries(summary.highlights)) {
    if (!selection.has(key)) continue;
    for (const highlight of items) {
      const marks = marksBySentence.get(highlight.sentence_index) ?? [];
      for (const span of highlight.spans) {
        marks.push({
          start: span.start,
          end: span.end,
          cssClass: "summary-highlight",
          title: key,
        });
      }
      marksBySentence.set(highlight.sentence_index, marks);
    }
  }

  const highlightedEvents = new Set<number>();
  for (const [key, items] of Object.entries(summary.highlights)) {
    if (!selection.has(key)) continue;
    for (const highlight of items) highlightedEvents.add(highlight.event_index);
  }
  parts.push(
    `<p class="summary-count">${highlightedEvents.size} event(s) highlighted</p>`,
  );

  for (const sentence of document.sentences) {
    if (!sentence.text.trim()) continue;
    const marks = marksBySentence.get(sentence.index) ?? [];
    parts.push(
      `<p class="sentence" data-index="${sentence.index}">` +
        renderMarked(sentence.text, marks) +
        "</p>",
    );
  }
  parts.push("</div>");
  return parts.join("\n");
}
