/** Typed client for the co-assurance service API. */

import type {
  EventKind,
  EventPayload,
  EvidencePayload,
  ModelPayload,
  ReportPayload,
  ToggleState,
  TracePayload,
  WhatIfPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(readonly status: number, readonly detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") {
        detail = body.detail;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly base: string = "",
  ) {}

  private get(path: string): Promise<Response> {
    return this.fetchImpl(`${this.base}${path}`);
  }

  private send(path: string, method: string, body: unknown): Promise<Response> {
    return this.fetchImpl(`${this.base}${path}`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  async getModel(): Promise<ModelPayload> {
    return parseOrThrow(await this.get("/api/model"));
  }

  async putEvidence(classId: string, state: ToggleState): Promise<EvidencePayload> {
    return parseOrThrow(
      await this.send(`/api/evidence/${encodeURIComponent(classId)}`, "PUT", { state }),
    );
  }

  async getReport(): Promise<ReportPayload> {
    return parseOrThrow(await this.get("/api/report"));
  }

  async postEvent(kind: EventKind, requirementId: string): Promise<EventPayload> {
    return parseOrThrow(
      await this.send("/api/event", "POST", { kind, requirement_id: requirementId }),
    );
  }

  async postWhatIf(overlay: Record<string, ToggleState>): Promise<WhatIfPayload> {
    return parseOrThrow(await this.send("/api/whatif", "POST", { overlay }));
  }

  async getTrace(): Promise<TracePayload> {
    return parseOrThrow(await this.get("/api/trace"));
  }
}
