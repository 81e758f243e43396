/** In-memory /v1 double that replays responses recorded from the real
 * service (scripts/gen_ui_fixtures.py), so every financial number the UI
 * sees was computed by the backend, never by test code.
 *
 * The one piece of logic it mirrors: evaluating a stored model whose
 * Stream-song current was saved as 6420 returns the recorded what-if
 * response, which is exactly what the real service does (a what-if equals
 * evaluating the overridden snapshot).
 */

import type { EvaluationWire, ModelWire, OverrideWire, RadarWire } from '../src/types.js';

import evaluateBaseline from './fixtures/evaluate.json';
import modelFixture from './fixtures/model.json';
import radarFixture from './fixtures/radar.json';
import whatif6420 from './fixtures/whatif_6420.json';

const clone = <T>(value: T): T => JSON.parse(JSON.stringify(value)) as T;

export class FakeServer {
  model: ModelWire = clone(modelFixture as ModelWire);
  radar: RadarWire = clone(radarFixture as RadarWire);
  putCalls: ModelWire[] = [];
  requests: string[] = [];

  private streamSongCurrent(model: ModelWire): string | null {
    for (const pool of model.pools) {
      for (const node of pool.nodes) {
        if (node.displayId === '1.5' && node.annotation) {
          return node.annotation.current;
        }
      }
    }
    return null;
  }

  private evaluateStored(): EvaluationWire {
    const current = this.streamSongCurrent(this.model);
    if (current === '3210') return clone(evaluateBaseline as EvaluationWire);
    if (current === '6420') return clone(whatif6420 as EvaluationWire);
    throw new Error(`unrecorded model state: Stream song current = ${current}`);
  }

  private whatIf(overrides: OverrideWire[]): Response {
    for (const override of overrides) {
      const known = this.model.pools.some((pool) =>
        pool.nodes.some(
          (node) =>
            node.displayId === override.taskDisplayId &&
            node.annotation?.kpi === override.kpiName,
        ),
      );
      if (!known) {
        return this.json(404, {
          code: 'annotation_error',
          message: `unknown task '${override.taskDisplayId}'`,
          location: 'overrides[0]',
        });
      }
    }
    if (overrides.length === 0) return this.json(200, this.evaluateStored());
    const [only] = overrides;
    if (
      overrides.length === 1 &&
      only.taskDisplayId === '1.5' &&
      only.kpiName === 'Streaming count' &&
      String(only.current) === '6420'
    ) {
      return this.json(200, clone(whatif6420 as EvaluationWire));
    }
    throw new Error(`unrecorded what-if: ${JSON.stringify(overrides)}`);
  }

  private json(status: number, body: unknown): Response {
    return new Response(JSON.stringify(body), {
      status,
      headers: { 'content-type': 'application/json' },
    });
  }

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? 'GET';
    this.requests.push(`${method} ${url}`);
    if (url.endsWith('/v1/model') && method === 'GET') {
      return this.json(200, this.model);
    }
    if (url.endsWith('/v1/model') && method === 'PUT') {
      const body = JSON.parse(String(init?.body)) as ModelWire;
      this.putCalls.push(clone(body));
      this.model = clone(body);
      return this.json(200, this.model);
    }
    if (url.endsWith('/v1/radar')) {
      return this.json(200, this.radar);
    }
    if (url.endsWith('/v1/evaluate') && method === 'POST') {
      return this.json(200, this.evaluateStored());
    }
    if (url.endsWith('/v1/whatif') && method === 'POST') {
      const body = JSON.parse(String(init?.body)) as { overrides: OverrideWire[] };
      return this.whatIf(body.overrides ?? []);
    }
    return this.json(404, { code: 'not_found', message: `no route ${url}`, location: null });
  };
}

export function installFakeServer(): FakeServer {
  const server = new FakeServer();
  globalThis.fetch = server.fetch as typeof fetch;
  return server;
}
