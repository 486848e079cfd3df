/**
 * Typed client for the eventlens /v1 HTTP API.
 *
 * All offsets in API payloads are Unicode scalar-value indices into the
 * owning sentence's text. The UI renders exclusively from these payloads;
 * no extraction or ranking logic lives client-side.
 */

export interface SpanRef {
  start: number;
  end: number;
  text?: string;
}

export interface ArgumentRef extends SpanRef {
  role: string;
  confidence: number;
}

export interface EventRecord {
  event_type: string;
  sentence_index: number;
  anchor_confidence: number;
  anchors: SpanRef[];
  arguments: ArgumentRef[];
  when: SpanRef | null;
  where: SpanRef | null;
}

export interface SentenceRecord {
  index: number;
  text: string;
  char_base: number;
  events: EventRecord[];
  related_edges: [number, number][];
}

export interface GraphNode {
  index: number;
  event_type: string;
  sentence_index: number;
  anchor_texts: string[];
  arguments: { role: string; text: string }[];
}

export interface GraphEdge {
  source: number;
  target: number;
  label: string;
}

export interface ExtractionResult {
  format_version: number;
  document: { id: string; language: string; text: string };
  sentences: SentenceRecord[];
  graph: { nodes: GraphNode[]; edges: GraphEdge[] };
  providers: Record<string, string>;
  translation_status?: TranslationStatus;
  translation_job?: string;
}

export type TranslationStatus = "pending" | "done" | "unavailable";

export interface Projection {
  event_index: number;
  kind: "anchor" | "argument" | "when" | "where";
  role: string | null;
  source: { start: number; end: number };
  target: { start: number; end: number } | null;
}

export interface TranslationResult {
  status: TranslationStatus;
  doc_id?: string;
  sentences?: {
    sentence_index: number;
    translation: string;
    projections: Projection[];
  }[];
}

export type Light = "green" | "yellow" | "red" | "black";

export interface ConditionScore {
  condition: "agent" | "patient" | "location" | "context";
  score: number;
  light: Light;
}

export interface IndexedEventRecord {
  event_id: string;
  doc_id: string;
  sentence_index: number;
  sentence_text: string;
  event_type: string;
  agent: { text: string; ec: number } | null;
  patient: { text: string; ec: number } | null;
  location: { text: string; ec: number; expanded_countries: string[] } | null;
  when_text: string | null;
  sentence_translation: string | null;
}

export interface SearchResponse {
  query: {
    event_types: string[];
    agent: string | null;
    patient: string | null;
    location: string | null;
    context: string | null;
  };
  results: {
    event: IndexedEventRecord;
    total: number;
    conditions: ConditionScore[];
  }[];
}

export interface SummaryResponse {
  doc_id: string;
  categories: string[];
  participants: { name: string; members: number }[];
  highlights: Record<
    string,
    { event_index: number; sentence_index: number; spans: { start: number; end: number }[] }[]
  >;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class EventLensClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  extract(text: string, language = "en"): Promise<ExtractionResult> {
    return this.request("/v1/extract", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, language }),
    });
  }

  translation(jobId: string): Promise<TranslationResult> {
    return this.request(`/v1/extract/${encodeURIComponent(jobId)}/translation`);
  }

  searchStructured(query: Record<string, unknown>, k = 20): Promise<SearchResponse> {
    return this.request("/v1/search", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query, k }),
    });
  }

  searchNl(nl: string, k = 20): Promise<SearchResponse> {
    return this.request("/v1/search", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ nl, k }),
    });
  }

  document(docId: string): Promise<ExtractionResult> {
    return this.request(`/v1/documents/${encodeURIComponent(docId)}`);
  }

  summary(docId: string, selection: string[]): Promise<SummaryResponse> {
    const params = selection
      .map((key) => `select=${encodeURIComponent(key)}`)
      .join("&");
    const suffix = params ? `?${params}` : "";
    return this.request(`/v1/documents/${encodeURIComponent(docId)}/summary${suffix}`);
  }

  /**
   * Poll the translation job until it leaves "pending", backing off
   * exponentially between attempts (base * 2^attempt, capped).
   */
  async pollTranslation(
    jobId: string,
    options: {
      baseDelayMs?: number;
      maxDelayMs?: number;
      maxAttempts?: number;
      sleep?: (ms: number) => Promise<void>;
    } = {},
  ): Promise<TranslationResult> {
    const base = options.baseDelayMs ?? 500;
    const cap = options.maxDelayMs ?? 8000;
    const maxAttempts = options.maxAttempts ?? 12;
    const sleep =
      options.sleep ?? ((ms: number) => new Promise<void>((r) => setTimeout(r, ms)));
    let last: TranslationResult = { status: "pending" };
    for (let attempt = 0; attempt < maxAttempts; attempt++) {
      last = await this.translation(jobId);
      if (last.status !== "pending") return last;
      await sleep(Math.min(base * 2 ** attempt, cap));
    }
    return last;
  }
}
