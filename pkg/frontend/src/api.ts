/** Thin fetch client for the /v1 API; all numbers stay server-computed strings. */

import type {
  ApiErrorWire,
  EvaluationWire,
  ModelWire,
  OverrideWire,
  RadarWire,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ApiErrorWire,
  ) {
    super(detail.message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail: ApiErrorWire = { code: 'error', message: response.statusText, location: null };
    try {
      detail = (await response.json()) as ApiErrorWire;
    } catch {
      // non-JSON error body; keep the synthetic detail
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

const json = (body: unknown): RequestInit => ({
  method: 'POST',
  headers: { 'content-type': 'application/json' },
  body: JSON.stringify(body),
});

export class ApiClient {
  constructor(private readonly base: string = '') {}

  getModel(): Promise<ModelWire> {
    return request(`${this.base}/v1/model`);
  }

  putModel(model: ModelWire): Promise<ModelWire> {
    return request(`${this.base}/v1/model`, { ...json(model), method: 'PUT' });
  }

  getRadar(): Promise<RadarWire> {
    return request(`${this.base}/v1/radar`);
  }

  evaluate(): Promise<EvaluationWire> {
    return request(`${this.base}/v1/evaluate`, { method: 'POST' });
  }

  whatIf(overrides: OverrideWire[]): Promise<EvaluationWire> {
    return request(`${this.base}/v1/whatif`, json({ overrides }));
  }
}
