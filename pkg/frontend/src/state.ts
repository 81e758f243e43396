/** View state: loaded projections, the KPI edit buffer, last evaluation.
 *
 * Invariants: the edit buffer only holds display ids present in the model,
 * and the overview panel is always rendered from the last evaluation
 * response; the UI never computes financial numbers itself.
 */

import type { EvaluationWire, ModelWire, NodeWire, OverrideWire, RadarWire } from './types.js';

export interface KpiEdit {
  taskDisplayId: string;
  kpiName: string;
  current?: string;
  target?: string;
}

export interface ViewState {
  model: ModelWire | null;
  radar: RadarWire | null;
  edits: Map<string, KpiEdit>;
  lastEvaluation: EvaluationWire | null;
  selectedActor: string | null;
}

export const newViewState = (): ViewState => ({
  model: null,
  radar: null,
  edits: new Map(),
  lastEvaluation: null,
  selectedActor: null,
});

const editKey = (taskDisplayId: string, kpiName: string): string =>
  `${taskDisplayId}::${kpiName}`;

/** Tasks carrying a named KPI, in model order. */
export function annotatedTasks(model: ModelWire): NodeWire[] {
  const tasks: NodeWire[] = [];
  for (const pool of model.pools) {
    for (const node of pool.nodes) {
      if (node.kind === 'task' && node.annotation && node.annotation.kpi) {
        tasks.push(node);
      }
    }
  }
  return tasks;
}

function findKpi(model: ModelWire | null, taskDisplayId: string, kpiName: string): NodeWire | null {
  if (!model) return null;
  for (const node of annotatedTasks(model)) {
    if (node.displayId === taskDisplayId && node.annotation!.kpi === kpiName) {
      return node;
    }
  }
  return null;
}

/** Record an edit; unknown display ids are rejected to keep the buffer valid. */
export function setEdit(state: ViewState, edit: KpiEdit): boolean {
  if (!findKpi(state.model, edit.taskDisplayId, edit.kpiName)) {
    return false;
  }
  const key = editKey(edit.taskDisplayId, edit.kpiName);
  const existing = state.edits.get(key) ?? {
    taskDisplayId: edit.taskDisplayId,
    kpiName: edit.kpiName,
  };
  const merged = { ...existing, ...edit };
  // an edit equal to the stored annotation value is not an edit
  const node = findKpi(state.model, edit.taskDisplayId, edit.kpiName)!;
  if (merged.current === (node.annotation!.current ?? undefined)) delete merged.current;
  if (merged.target === (node.annotation!.target ?? undefined)) delete merged.target;
  if (merged.current === undefined && merged.target === undefined) {
    state.edits.delete(key);
  } else {
    state.edits.set(key, merged);
  }
  return true;
}

export function clearEdits(state: ViewState): void {
  state.edits.clear();
}

/** Drop buffered edits whose tasks vanished after a model reload. */
export function pruneEdits(state: ViewState): void {
  for (const [key, edit] of [...state.edits]) {
    if (!findKpi(state.model, edit.taskDisplayId, edit.kpiName)) {
      state.edits.delete(key);
    }
  }
}

export function editFor(
  state: ViewState,
  taskDisplayId: string,
  kpiName: string,
): KpiEdit | undefined {
  return state.edits.get(editKey(taskDisplayId, kpiName));
}

export function editsToOverrides(state: ViewState): OverrideWire[] {
  return [...state.edits.values()].map((edit) => {
    const override: OverrideWire = {
      taskDisplayId: edit.taskDisplayId,
      kpiName: edit.kpiName,
    };
    if (edit.current !== undefined) override.current = edit.current;
    if (edit.target !== undefined) override.target = edit.target;
    return override;
  });
}

/** A deep copy of the model with the buffered edits written into annotations. */
export function applyEditsToModel(model: ModelWire, edits: KpiEdit[]): ModelWire {
  const copy: ModelWire = JSON.parse(JSON.stringify(model));
  for (const edit of edits) {
    for (const pool of copy.pools) {
      for (const node of pool.nodes) {
        if (
          node.displayId === edit.taskDisplayId &&
          node.annotation &&
          node.annotation.kpi === edit.kpiName
        ) {
          if (edit.current !== undefined) node.annotation.current = edit.current;
          if (edit.target !== undefined) node.annotation.target = edit.target;
        }
      }
    }
  }
  return copy;
}
