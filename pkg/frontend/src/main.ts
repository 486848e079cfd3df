/**
 * Browser bootstrap: wires the views to the API client. All state lives in
 * the API responses; this file only dispatches events and swaps innerHTML.
 */

import { EventLensClient, ExtractionResult, TranslationResult } from "./api.js";
import { graphView } from "./views/graph.js";
import { searchForm, searchResults } from "./views/search.js";
import { summaryView } from "./views/summary.js";
import { textView } from "./views/text.js";

const client = new EventLensClient("");

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element as T;
}

async function runExtract(): Promise<void> {
  const text = byId<HTMLTextAreaElement>("extract-text").value;
  const language = byId<HTMLInputElement>("extract-language").value || "en";
  const output = byId<HTMLDivElement>("extract-output");
  const graphOutput = byId<HTMLDivElement>("graph-output");
  output.innerHTML = '<p class="loading">Extracting…</p>';
  try {
    const extraction: ExtractionResult = await client.extract(text, language);
    output.innerHTML = textView(extraction);
    graphOutput.innerHTML = graphView(extraction.graph);
    if (extraction.translation_status === "pending" && extraction.translation_job) {
      const translation: TranslationResult = await client.pollTranslation(
        extraction.translation_job,
      );
      if (translation.status === "done") {
        output.innerHTML = textView(extraction, translation);
      }
    }
  } catch (error) {
    output.innerHTML = `<p class="error">${String(error)}</p>`;
  }
}

async function runSearch(form: HTMLFormElement): Promise<void> {
  const output = byId<HTMLDivElement>("search-output");
  output.innerHTML = '<p class="loading">Searching…</p>';
  const data = new FormData(form);
  const nl = String(data.get("nl") ?? "").trim();
  try {
    const response = nl
      ? await client.searchNl(nl)
      : await client.searchStructured({
          event_types: data.getAll("event_types").map(String),
          agent: data.get("agent") || null,
          patient: data.get("patient") || null,
          location: data.get("location") || null,
          context: data.get("context") || null,
        });
    output.innerHTML = searchResults(response);
  } catch (error) {
    output.innerHTML = `<p class="error">${String(error)}</p>`;
  }
}

const selection = new Set<string>();
let currentDoc: ExtractionResult | null = null;

async function runSummary(): Promise<void> {
  const docId = byId<HTMLInputElement>("summary-doc").value.trim();
  const output = byId<HTMLDivElement>("summary-output");
  if (!docId) return;
  try {
    currentDoc = await client.document(docId);
    const summary = await client.summary(docId, Array.from(selection));
    output.innerHTML = summaryView(currentDoc, summary, selection);
  } catch (error) {
    output.innerHTML = `<p class="error">${String(error)}</p>`;
  }
}

export function bootstrap(): void {
  byId<HTMLButtonElement>("extract-run").addEventListener("click", () => {
    void runExtract();
  });
  const formHost = byId<HTMLDivElement>("search-form-host");
  const types = (formHost.dataset.eventTypes ?? "").split(",").filter(Boolean);
  formHost.innerHTML = searchForm(types);
  formHost.querySelector("form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    void runSearch(event.currentTarget as HTMLFormElement);
  });
  byId<HTMLButtonElement>("summary-run").addEventListener("click", () => {
    void runSummary();
  });
  byId<HTMLDivElement>("summary-output").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (!target.classList.contains("chip") || target.hasAttribute("disabled")) return;
    const key = target.dataset.key!;
    if (selection.has(key)) selection.delete(key);
    else selection.add(key);
    void runSummary();
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  bootstrap();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", bootstrap);
}
