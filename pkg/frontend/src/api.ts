/** Typed fetch client for the session service. The UI never computes
 * priorities or consistency itself; everything displayed comes out of these
 * calls. */

import type {
  JudgmentResponse,
  JudgmentValue,
  ResultsPayload,
  SaveResponse,
  SensitivityPayload,
  ServiceErrorBody,
  SessionInfo,
  SessionSummary,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly locus: string | null = null,
    readonly missing?: Record<string, [string, string][]>,
  ) {
    super(message);
  }
}

export class Client {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, "network/unreachable", String(err));
    }
    const text = await response.text();
    const body = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const err = (body ?? {}) as Partial<ServiceErrorBody>;
      throw new ApiError(response.status, err.code ?? "service/error",
        err.message ?? response.statusText, err.locus ?? null, err.missing);
    }
    return body as T;
  }

  private json(body: unknown): RequestInit {
    return {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    };
  }

  createSession(document: unknown): Promise<{ id: string; revision: number; name: string }> {
    return this.request("/sessions", this.json(document));
  }

  listSessions(): Promise<SessionSummary[]> {
    return this.request("/sessions");
  }

  session(id: string): Promise<SessionInfo> {
    return this.request(`/sessions/${id}`);
  }

  submitJudgment(id: string, context: string, i: string, j: string,
                 value: JudgmentValue): Promise<JudgmentResponse> {
    return this.request(`/sessions/${id}/judgments`, {
      ...this.json({ context, i, j, value }),
      method: "PUT",
    });
  }

  results(id: string): Promise<ResultsPayload> {
    return this.request(`/sessions/${id}/results`);
  }

  sensitivity(id: string, criterion: string): Promise<SensitivityPayload> {
    return this.request(`/sessions/${id}/sensitivity/${criterion}`);
  }

  save(id: string, path?: string): Promise<SaveResponse> {
    return this.request(`/sessions/${id}/save`, this.json(path ? { path } : {}));
  }
}
