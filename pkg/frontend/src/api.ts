/** Thin fetch client for the prediction service. */

import type {
  ImportanceEntry,
  InferenceRow,
  PredictionResponse,
  WhatIfRequest,
  WhatIfResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<never> {
  let message = `service error (HTTP ${response.status})`;
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") message = body.error;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ApiError(response.status, message);
}

export interface ApiClient {
  predict(record: Record<string, number>): Promise<PredictionResponse>;
  whatif(request: WhatIfRequest): Promise<WhatIfResponse>;
  importance(): Promise<ImportanceEntry[]>;
  inference(): Promise<InferenceRow[]>;
}

export class HttpClient implements ApiClient {
  constructor(readonly baseUrl: string) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) await parseError(response);
    return (await response.json()) as T;
  }

  predict(record: Record<string, number>): Promise<PredictionResponse> {
    return this.post<PredictionResponse>("/predict", record);
  }

  whatif(request: WhatIfRequest): Promise<WhatIfResponse> {
    return this.post<WhatIfResponse>("/whatif", request);
  }

  async importance(): Promise<ImportanceEntry[]> {
    const body = await this.get<{ entries: ImportanceEntry[] }>("/importance");
    return body.entries;
  }

  async inference(): Promise<InferenceRow[]> {
    const body = await this.get<{ rows: InferenceRow[] }>("/inference");
    return body.rows;
  }
}

export function resolveBaseUrl(defaultUrl = "http://127.0.0.1:8321"): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? defaultUrl;
}
