/**
 * Search view: the structured query form (event-type checkboxes + one text
 * field per condition), the natural-language box with its parse echo, and
 * ranked results each carrying four traffic lights. A black light means the
 * event had no evidence for that condition; a dash means the query did not
 * constrain it.
 */

import { ConditionScore, SearchResponse } from "../api.js";
import { escapeHtml } from "../highlight.js";

const CONDITIONS = ["agent", "patient", "location", "context"] as const;

export function searchForm(eventTypes: string[], nl = ""): string {
  const checkboxes = eventTypes
    .map(
      (t) =>
        `<label class="type-option"><input type="checkbox" name="event_types" value="${escapeHtml(t)}"> ${escapeHtml(t)}</label>`,
    )
    .join("\n");
  const fields = CONDITIONS.map(
    (c) =>
      `<label class="condition-field">${c}<input type="text" name="${c}" autocomplete="off"></label>`,
  ).join("\n");
  return (
    '<form class="search-form">' +
    `<fieldset class="nl"><legend>Natural language</legend><input type="text" name="nl" value="${escapeHtml(nl)}" placeholder="e.g. anti-inflation protests in Vietnam"></fieldset>` +
    `<fieldset class="types"><legend>Event types</legend>${checkboxes}</fieldset>` +
    `<fieldset class="conditions"><legend>Conditions</legend>${fields}</fieldset>` +
    '<button type="submit">Search</button>' +
    "</form>"
  );
}

function queryEcho(query: SearchResponse["query"]): string {
  const pieces: string[] = [];
  if (query.event_types.length) {
    pieces.push(`types: ${query.event_types.map(escapeHtml).join(", ")}`);
  }
  for (const condition of CONDITIONS) {
    const value = query[condition];
    if (value) pieces.push(`${condition}: ${escapeHtml(value)}`);
  }
  return `<p class="query-echo">Query — ${pieces.join(" · ")}</p>`;
}

function lightMarkup(condition: string, score: ConditionScore | undefined): string {
  if (!score) {
    return `<span class="light light-unused" data-condition="${condition}" title="${condition}: not in query">—</span>`;
  }
  return (
    `<span class="light light-${score.light}" data-condition="${condition}" ` +
    `title="${condition}: ${score.light} (${score.score.toFixed(3)})"></span>`
  );
}

function resultMarkup(
  result: SearchResponse["results"][number],
  rank: number,
): string {
  const byCondition = new Map(result.conditions.map((c) => [c.condition, c]));
  const lights = CONDITIONS.map((c) => lightMarkup(c, byCondition.get(c))).join("");
  const event = result.event;
  const fields: string[] = [];
  if (event.agent) fields.push(`agent: ${escapeHtml(event.agent.text)}`);
  if (event.patient) fields.push(`patient: ${escapeHtml(event.patient.text)}`);
  if (event.location) fields.push(`location: ${escapeHtml(event.location.text)}`);
  if (event.when_text) fields.push(`when: ${escapeHtml(event.when_text)}`);
  const translation = event.sentence_translation
    ? `<p class="result-translation" lang="en">${escapeHtml(event.sentence_translation)}</p>`
    : "";
  return (
    `<li class="result" data-event-id="${escapeHtml(event.event_id)}">` +
    `<div class="result-head"><span class="rank">${rank}</span>` +
    `<span class="lights">${lights}</span>` +
    `<span class="result-type">${escapeHtml(event.event_type)}</span>` +
    `<span class="result-score">${result.total.toFixed(4)}</span></div>` +
    `<p class="result-sentence">${escapeHtml(event.sentence_text)}</p>` +
    translation +
    (fields.length ? `<p class="result-fields">${fields.join(" · ")}</p>` : "") +
    "</li>"
  );
}

export function searchResults(response: SearchResponse): string {
  if (!response.results.length) {
    return (
      '<div class="search-results">' +
      queryEcho(response.query) +
      '<p class="empty-state">No events matched this query.</p>' +
      "</div>"
    );
  }
  const items = response.results.map((r, i) => resultMarkup(r, i + 1)).join("\n");
  return (
    '<div class="search-results">' +
    queryEcho(response.query) +
    `<ol class="results">${items}</ol>` +
    "</div>"
  );
}
