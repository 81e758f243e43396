/** SPA bootstrap: load projections, render panels, wire the what-if flow.
 *
 * The stored model changes only through an explicit save (PUT). What-if
 * runs re-evaluate a server-side snapshot; clearing edits re-runs the
 * baseline evaluation, so every number on screen is server-computed.
 */

import { ApiClient, ApiError } from './api.js';
import { renderOverview } from './overview.js';
import { renderProcess } from './process.js';
import { renderRadar } from './radar.js';
import {
  applyEditsToModel,
  clearEdits,
  editsToOverrides,
  newViewState,
  pruneEdits,
  type ViewState,
} from './state.js';
import { renderWhatifPanel, showToast } from './whatif.js';

export interface AppElements {
  radar: HTMLElement;
  process: HTMLElement;
  whatif: HTMLElement;
  overview: HTMLElement;
  status: HTMLElement;
  runButton: HTMLElement;
  clearButton: HTMLElement;
  saveButton: HTMLElement;
}

export class App {
  readonly state: ViewState = newViewState();

  constructor(
    private readonly api: ApiClient,
    private readonly el: AppElements,
  ) {
    el.runButton.addEventListener('click', () => void this.runWhatIf());
    el.clearButton.addEventListener('click', () => void this.clearAndReevaluate());
    el.saveButton.addEventListener('click', () => void this.save());
  }

  async load(): Promise<void> {
    try {
      this.state.model = await this.api.getModel();
    } catch (error) {
      this.state.model = null;
      this.report(error, 'model not loaded');
    }
    try {
      this.state.radar = await this.api.getRadar();
    } catch {
      this.state.radar = null; // radar is optional; panel shows a placeholder
    }
    pruneEdits(this.state);
    if (this.state.model) {
      try {
        this.state.lastEvaluation = await this.api.evaluate();
      } catch (error) {
        this.state.lastEvaluation = null;
        this.report(error, 'evaluation failed');
      }
    }
    this.render();
  }

  render(): void {
    renderRadar(this.el.radar, this.state.radar);
    renderProcess(this.el.process, this.state.model);
    renderWhatifPanel(this.el.whatif, this.state, { onEdit: () => this.renderEditsOnly() });
    renderOverview(this.el.overview, this.state.lastEvaluation, this.state.selectedActor);
  }

  /** Inputs keep focus while typing; only reflect buffer state elsewhere. */
  private renderEditsOnly(): void {
    this.el.status.dataset.pendingEdits = String(this.state.edits.size);
  }

  async runWhatIf(): Promise<void> {
    const overrides = editsToOverrides(this.state);
    try {
      this.state.lastEvaluation = overrides.length
        ? await this.api.whatIf(overrides)
        : await this.api.evaluate();
    } catch (error) {
      this.report(error, 'what-if failed');
      return;
    }
    this.render();
  }

  async clearAndReevaluate(): Promise<void> {
    clearEdits(this.state);
    try {
      this.state.lastEvaluation = await this.api.evaluate();
    } catch (error) {
      this.report(error, 'evaluation failed');
      return;
    }
    this.render();
  }

  async save(): Promise<void> {
    if (!this.state.model) return;
    const updated = applyEditsToModel(this.state.model, [...this.state.edits.values()]);
    try {
      await this.api.putModel(updated);
      this.state.model = await this.api.getModel();
      clearEdits(this.state);
      this.state.lastEvaluation = await this.api.evaluate();
    } catch (error) {
      this.report(error, 'save failed');
      return;
    }
    this.render();
  }

  private report(error: unknown, fallback: string): void {
    if (error instanceof ApiError) {
      showToast(this.el.status, `${error.status}: ${error.detail.message}`);
      if (error.status === 404) {
        showToast(this.el.status, 'view may be stale; reload the model', 'hint');
      }
    } else {
      showToast(this.el.status, fallback);
    }
  }
}

export function bootstrap(doc: Document, api = new ApiClient()): App {
  const byId = (id: string): HTMLElement => {
    const el = doc.getElementById(id);
    if (!el) throw new Error(`missing #${id}`);
    return el;
  };
  const app = new App(api, {
    radar: byId('radar'),
    process: byId('process'),
    whatif: byId('whatif'),
    overview: byId('overview'),
    status: byId('status'),
    runButton: byId('run-whatif'),
    clearButton: byId('clear-edits'),
    saveButton: byId('save-model'),
  });
  void app.load();
  return app;
}

declare global {
  interface Window {
    cbtrackerApp?: App;
  }
}
