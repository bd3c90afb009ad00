/** Typed client for the /api/v1 JSON interface.
 *
 * Every request goes through one code path that attaches the bearer token,
 * decodes the error envelope, and raises ApiError so panels can surface the
 * server's message (and field, when present) verbatim. A ConflictError from
 * a stale save additionally triggers the session's conflict hook so the UI
 * can prompt for a reload.
 */

export interface ErrorPayload {
  code: string;
  message: string;
  field?: string | null;
}

export class ApiError extends Error {
  readonly code: string;
  readonly field: string | null;
  readonly status: number;

  constructor(status: number, payload: ErrorPayload) {
    super(payload.message);
    this.name = "ApiError";
    this.code = payload.code;
    this.field = payload.field ?? null;
    this.status = status;
  }
}

export interface Mention {
  mention_id: string;
  start: number;
  end: number;
  text: string;
  entity_id: string;
  category: string;
  kind: string;
}

export interface Entity {
  entity_id: string;
  label: string;
  sort_key: string;
  category: string;
  kind: string;
  aliases: string[];
  location: string;
  wikidata_id: string | null;
  treccani_id: string | null;
  occurrences: number;
  wikidata_linked: boolean;
}

export interface DocInfo {
  doc_id: string;
  status: string;
  revision: number;
  mentions: number;
  entities: number;
  metadata: boolean;
}

export interface CategoryInfo {
  name: string;
  kind: string;
  display_class: string;
}

export interface ConcordanceEntry {
  mention_id: string;
  keyword: string;
  left_context: string;
  right_context: string;
  line: string;
  position: number;
  style: string;
  rendered: string;
}

export interface Candidate {
  qid: string;
  label: string;
  description: string;
  match_score: number;
}

export interface Span {
  start: number;
  end: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  token: string | null = null;
  onConflict: (() => void) | null = null;
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "/api/v1", fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    raw = false,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let payload: string | undefined;
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      payload = JSON.stringify(body);
    }
    const response = await this.fetchImpl(`${this.base}${path}`, {
      method,
      headers,
      body: payload,
    });
    if (!response.ok) {
      let envelope: ErrorPayload = {
        code: "HttpError",
        message: `${response.status} ${response.statusText}`,
      };
      try {
        const parsed = (await response.json()) as { error?: ErrorPayload };
        if (parsed && parsed.error && parsed.error.code) envelope = parsed.error;
      } catch {
        /* non-JSON error body: keep the status-line envelope */
      }
      const error = new ApiError(response.status, envelope);
      if (error.code === "ConflictError" && this.onConflict) this.onConflict();
      throw error;
    }
    if (raw) return (await response.text()) as unknown as T;
    return (await response.json()) as T;
  }

  private entityPath(docId: string, entityId: string, tail = ""): string {
    const bare = entityId.startsWith("#") ? entityId.slice(1) : entityId;
    return `/documents/${encodeURIComponent(docId)}/entities/${encodeURIComponent(bare)}${tail}`;
  }

  // -- session --------------------------------------------------------------

  async login(username: string, password: string): Promise<{ role: string }> {
    const data = await this.request<{ token: string; role: string }>(
      "POST",
      "/auth/login",
      { username, password },
    );
    this.token = data.token;
    return { role: data.role };
  }

  changePassword(oldPassword: string, newPassword: string): Promise<{ ok: boolean }> {
    return this.request("POST", "/auth/change-password", {
      old_password: oldPassword,
      new_password: newPassword,
    });
  }

  health(): Promise<{ ok: boolean }> {
    return this.request("GET", "/health");
  }

  // -- documents --------------------------------------------------------------

  listDocuments(filters: { status?: string; q?: string } = {}): Promise<{ documents: DocInfo[] }> {
    const params = new URLSearchParams();
    if (filters.status) params.set("status", filters.status);
    if (filters.q) params.set("q", filters.q);
    const query = params.toString();
    return this.request("GET", `/documents${query ? `?${query}` : ""}`);
  }

  upload(docId: string, content: string, contentType = "auto"): Promise<DocInfo> {
    return this.request("POST", "/documents", {
      doc_id: docId,
      content,
      content_type: contentType,
    });
  }

  docInfo(docId: string): Promise<DocInfo> {
    return this.request("GET", `/documents/${encodeURIComponent(docId)}`);
  }

  documentText(docId: string): Promise<{ text: string }> {
    return this.request("GET", `/documents/${encodeURIComponent(docId)}/text`);
  }

  documentHtml(docId: string): Promise<string> {
    return this.request("GET", `/documents/${encodeURIComponent(docId)}/html`, undefined, true);
  }

  setStatus(docId: string, status: string): Promise<DocInfo> {
    return this.request("PUT", `/documents/${encodeURIComponent(docId)}/status`, { status });
  }

  save(docId: string, baseRevision: number): Promise<{ doc_id: string; revision: number }> {
    return this.request("POST", `/documents/${encodeURIComponent(docId)}/save`, {
      base_revision: baseRevision,
    });
  }

  // -- annotation --------------------------------------------------------------

  extend(docId: string, span: Span): Promise<Span> {
    return this.request(
      "GET",
      `/documents/${encodeURIComponent(docId)}/extend?start=${span.start}&end=${span.end}`,
    );
  }

  mentions(docId: string): Promise<{ mentions: Mention[] }> {
    return this.request("GET", `/documents/${encodeURIComponent(docId)}/mentions`);
  }

  mark(docId: string, span: Span, category: string): Promise<{ mention: Mention; entity: Entity }> {
    return this.request("POST", `/documents/${encodeURIComponent(docId)}/mentions`, {
      start: span.start,
      end: span.end,
      category,
    });
  }

  highlightAll(
    docId: string,
    span: Span,
    category: string,
  ): Promise<{ mentions: Mention[]; entity: Entity | null }> {
    return this.request("POST", `/documents/${encodeURIComponent(docId)}/highlight-all`, {
      start: span.start,
      end: span.end,
      category,
    });
  }

  merge(docId: string, source: string, target: string): Promise<{ entity: Entity }> {
    return this.request("POST", `/documents/${encodeURIComponent(docId)}/merge`, {
      source,
      target,
    });
  }

  moveMention(docId: string, mentionId: string, target: string): Promise<{ mention: Mention }> {
    return this.request(
      "POST",
      `/documents/${encodeURIComponent(docId)}/mentions/${encodeURIComponent(mentionId)}/move`,
      { target },
    );
  }

  setLabel(docId: string, entityId: string, label: string): Promise<{ entity: Entity }> {
    return this.request("PUT", this.entityPath(docId, entityId, "/label"), { label });
  }

  setSortKey(docId: string, entityId: string, sortKey: string): Promise<{ entity: Entity }> {
    return this.request("PUT", this.entityPath(docId, entityId, "/sort-key"), {
      sort_key: sortKey,
    });
  }

  addAlias(docId: string, entityId: string, alias: string): Promise<{ entity: Entity }> {
    return this.request("POST", this.entityPath(docId, entityId, "/aliases"), { alias });
  }

  setLocation(docId: string, entityId: string, location: string): Promise<{ entity: Entity }> {
    return this.request("PUT", this.entityPath(docId, entityId, "/location"), { location });
  }

  emptyTrash(docId: string): Promise<{ purged: number }> {
    return this.request("POST", `/documents/${encodeURIComponent(docId)}/empty-trash`);
  }

  // -- entity views --------------------------------------------------------------

  categories(docId: string): Promise<{ categories: CategoryInfo[] }> {
    return this.request("GET", `/documents/${encodeURIComponent(docId)}/categories`);
  }

  entities(
    docId: string,
    filters: { category?: string; location?: string } = {},
  ): Promise<{ entities: Entity[] }> {
    const params = new URLSearchParams();
    if (filters.category) params.set("category", filters.category);
    if (filters.location) params.set("location", filters.location);
    const query = params.toString();
    return this.request(
      "GET",
      `/documents/${encodeURIComponent(docId)}/entities${query ? `?${query}` : ""}`,
    );
  }

  entity(docId: string, entityId: string): Promise<{ entity: Entity }> {
    return this.request("GET", this.entityPath(docId, entityId));
  }

  concordance(
    docId: string,
    entityId: string,
    options: { style?: string; window?: number; sort?: string } = {},
  ): Promise<{ style: string; window_words: number; entries: ConcordanceEntry[] }> {
    const params = new URLSearchParams();
    if (options.style) params.set("style", options.style);
    if (options.window) params.set("window", String(options.window));
    if (options.sort) params.set("sort", options.sort);
    const query = params.toString();
    return this.request(
      "GET",
      this.entityPath(docId, entityId, `/concordance${query ? `?${query}` : ""}`),
    );
  }

  // -- exchange --------------------------------------------------------------

  exportDocument(docId: string, format: "html" | "tei" | "entities"): Promise<string> {
    return this.request(
      "GET",
      `/documents/${encodeURIComponent(docId)}/export/${format}`,
      undefined,
      true,
    );
  }

  async importEntities(docId: string, payload: string): Promise<{ entities: number }> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(
      `${this.base}/documents/${encodeURIComponent(docId)}/import/entities`,
      { method: "POST", headers, body: payload },
    );
    if (!response.ok) {
      const parsed = (await response.json()) as { error: ErrorPayload };
      throw new ApiError(response.status, parsed.error);
    }
    return (await response.json()) as { entities: number };
  }

  // -- reconciliation --------------------------------------------------------------

  reconcileSearch(label: string, limit = 10): Promise<{ candidates: Candidate[] }> {
    return this.request(
      "GET",
      `/reconcile/search?label=${encodeURIComponent(label)}&limit=${limit}`,
    );
  }

  reconcileEntity(
    qid: string,
  ): Promise<{ qid: string; label: string; description: string; treccani_id: string }> {
    return this.request("GET", `/reconcile/entity/${encodeURIComponent(qid)}`);
  }

  linkWikidata(docId: string, entityId: string, qid: string): Promise<{ entity: Entity }> {
    return this.request("PUT", this.entityPath(docId, entityId, "/wikidata"), { qid });
  }

  unlinkWikidata(docId: string, entityId: string): Promise<{ entity: Entity }> {
    return this.request("DELETE", this.entityPath(docId, entityId, "/wikidata"));
  }

  // -- metadata --------------------------------------------------------------

  getMetadata(docId: string): Promise<{ metadata: Record<string, unknown> | null }> {
    return this.request("GET", `/documents/${encodeURIComponent(docId)}/metadata`);
  }

  putMetadata(
    docId: string,
    record: Record<string, unknown>,
  ): Promise<{ metadata: Record<string, unknown> }> {
    return this.request("PUT", `/documents/${encodeURIComponent(docId)}/metadata`, record);
  }
}
