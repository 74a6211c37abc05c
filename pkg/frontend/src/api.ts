// Thin typed client for the workbench HTTP API. Every method maps to one
// endpoint; failures surface as ApiError with the server's code/where/line/col.

import type {
  ApiErrorBody,
  ComponentSummary,
  EvalRequest,
  EvalResponse,
  ParamsJson,
  PipelineReport,
  PoRow,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
    signal?: AbortSignal;
  },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  status: number;
  code: string;
  where?: string;
  line?: number;
  col?: number;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.where = body.where;
    this.line = body.line;
    this.col = body.col;
  }
}

export class WorkbenchClient {
  readonly baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? (globalThis.fetch as unknown as FetchLike);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const init: Parameters<FetchLike>[1] = { method, signal };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    let parsed: unknown;
    try {
      parsed = await res.json();
    } catch {
      parsed = { code: "bad-response", message: `HTTP ${res.status}` };
    }
    if (!res.ok) {
      throw new ApiError(res.status, parsed as ApiErrorBody);
    }
    return parsed as T;
  }

  async components(): Promise<ComponentSummary[]> {
    const data = await this.request<{ components: ComponentSummary[] }>(
      "GET",
      "/api/components",
    );
    return data.components;
  }

  async pos(
    component: string,
    filter: "all" | "unproved" | "proved" = "all",
  ): Promise<PoRow[]> {
    const data = await this.request<{ component: string; pos: PoRow[] }>(
      "GET",
      `/api/components/${encodeURIComponent(component)}/pos?filter=${filter}`,
    );
    return data.pos;
  }

  async sidecar(
    component: string,
    kind: "pmm" | "wd_pmm" | "user_pass",
  ): Promise<string> {
    const data = await this.request<{ component: string; text: string }>(
      "GET",
      `/api/components/${encodeURIComponent(component)}/${kind}`,
    );
    return data.text;
  }

  evalGoal(req: EvalRequest, signal?: AbortSignal): Promise<EvalResponse> {
    return this.request<EvalResponse>("POST", "/api/eval", req, signal);
  }

  pipeline(
    component: string,
    body: { params?: Partial<ParamsJson>; emit_rules?: boolean } = {},
  ): Promise<PipelineReport> {
    return this.request<PipelineReport>(
      "POST",
      `/api/components/${encodeURIComponent(component)}/pipeline`,
      body,
    );
  }
}
