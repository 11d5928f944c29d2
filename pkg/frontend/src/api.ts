import type {
  ApplicantDetail,
  AttributeInfo,
  ChartSeries,
  DatasetInfo,
  SessionPayload,
  SessionRequest,
  StepPayload,
  TransitionPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client for the backend; `fetchImpl` is injectable for tests. */
export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, init);
    const body = await resp.json();
    if (!resp.ok) {
      const err = body?.error ?? { code: "http_error", message: resp.statusText };
      throw new ApiError(resp.status, err.code, err.message);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  datasets(): Promise<DatasetInfo[]> {
    return this.request("/api/datasets");
  }

  attributes(dataset: string): Promise<AttributeInfo[]> {
    return this.request(`/api/datasets/${encodeURIComponent(dataset)}/attributes`);
  }

  years(dataset: string): Promise<number[]> {
    return this.request(`/api/datasets/${encodeURIComponent(dataset)}/years`);
  }

  createSession(dataset: string, req: SessionRequest): Promise<SessionPayload> {
    return this.post(`/api/datasets/${encodeURIComponent(dataset)}/sessions`, req);
  }

  step(sessionId: string, iterations: number): Promise<StepPayload> {
    return this.post(`/api/sessions/${sessionId}/step`, { iterations });
  }

  move(sessionId: string, nodeId: string, x: number, y: number): Promise<{ ok: boolean }> {
    return this.post(`/api/sessions/${sessionId}/move`, { node_id: nodeId, x, y });
  }

  transition(sessionId: string, toYear: number): Promise<TransitionPayload> {
    return this.post(`/api/sessions/${sessionId}/transition`, { to_year: toYear });
  }

  chart(dataset: string, x: string, limit?: number, offset?: number): Promise<ChartSeries[]> {
    const params = new URLSearchParams({ x });
    if (limit !== undefined) params.set("limit", String(limit));
    if (offset !== undefined) params.set("offset", String(offset));
    return this.request(`/api/datasets/${encodeURIComponent(dataset)}/chart?${params}`);
  }

  applicantDetail(dataset: string, applicantId: string): Promise<ApplicantDetail> {
    return this.request(
      `/api/datasets/${encodeURIComponent(dataset)}/applicants/${encodeURIComponent(applicantId)}`,
    );
  }
}
