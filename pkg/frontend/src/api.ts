// Typed client for the recommendation service. Each call accepts an
// AbortSignal so panels can cancel a stale request when a newer one starts.

import type {
  CounterfactualResponse,
  ExplainMethod,
  ExplainResponse,
  ModelInfo,
  PredictionResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
    public details?: unknown,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") throw err;
    throw new ApiError(0, "service unreachable");
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    // non-JSON error bodies fall through with a generic message
  }
  if (!response.ok) {
    const message =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `request failed (${response.status})`;
    throw new ApiError(response.status, message, body);
  }
  return body as T;
}

export interface ApiClient {
  model(): Promise<ModelInfo>;
  predict(features: number[], signal?: AbortSignal): Promise<PredictionResponse>;
  explain(
    features: number[],
    method: ExplainMethod,
    targetClass: string | undefined,
    seed: number,
    signal?: AbortSignal,
  ): Promise<ExplainResponse>;
  counterfactual(
    features: number[],
    targetClass: string,
    immutable: string[],
    count: number,
    seed: number,
    signal?: AbortSignal,
  ): Promise<CounterfactualResponse>;
}

export function createClient(baseUrl = ""): ApiClient {
  const json = (payload: unknown, signal?: AbortSignal): RequestInit => ({
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
    signal,
  });
  return {
    model: () => request<ModelInfo>(`${baseUrl}/v1/model`, { method: "GET" }),
    predict: (features, signal) =>
      request<PredictionResponse>(`${baseUrl}/v1/predict`, json({ features }, signal)),
    explain: (features, method, target_class, seed, signal) =>
      request<ExplainResponse>(
        `${baseUrl}/v1/explain`,
        json({ features, method, target_class, seed }, signal),
      ),
    counterfactual: (features, target_class, immutable, count, seed, signal) =>
      request<CounterfactualResponse>(
        `${baseUrl}/v1/counterfactual`,
        json({ features, target_class, immutable, count, seed }, signal),
      ),
  };
}

/**
 * One-request-per-panel guard: starting a new call aborts the previous one,
 * and responses of aborted calls never reach the caller.
 */
export class PanelRequest {
  private controller: AbortController | null = null;

  async run<T>(fn: (signal: AbortSignal) => Promise<T>): Promise<T | null> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      const result = await fn(controller.signal);
      return controller.signal.aborted ? null : result;
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return null;
      if (controller.signal.aborted) return null;
      throw err;
    }
  }
}
