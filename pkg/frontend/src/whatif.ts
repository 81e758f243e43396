/** What-if panel: a KPI table with current/target inputs backed by the
 * edit buffer. Edits survive re-renders; numbers shown next to the inputs
 * come from the last evaluation response.
 */

import { annotatedTasks, editFor, setEdit, type ViewState } from './state.js';
import { kpiValue } from './overview.js';

export interface WhatifHandlers {
  onEdit: () => void;
}

export function renderWhatifPanel(
  container: HTMLElement,
  state: ViewState,
  handlers: WhatifHandlers,
): void {
  container.textContent = '';
  if (!state.model) {
    const placeholder = document.createElement('div');
    placeholder.className = 'placeholder';
    placeholder.textContent = 'No model loaded';
    container.appendChild(placeholder);
    return;
  }
  const table = document.createElement('table');
  table.className = 'whatif-table';
  const head = document.createElement('tr');
  for (const text of ['task', 'KPI', 'current', 'target', 'evaluated']) {
    const th = document.createElement('th');
    th.textContent = text;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const node of annotatedTasks(state.model)) {
    const annotation = node.annotation!;
    const displayId = node.displayId!;
    const row = document.createElement('tr');
    row.dataset.task = displayId;
    row.dataset.kpi = annotation.kpi;

    const nameCell = document.createElement('td');
    nameCell.textContent = `${displayId} ${node.name}`;
    const kpiCell = document.createElement('td');
    kpiCell.textContent = annotation.kpi;
    row.append(nameCell, kpiCell);

    const edit = editFor(state, displayId, annotation.kpi);
    for (const side of ['current', 'target'] as const) {
      const cell = document.createElement('td');
      const input = document.createElement('input');
      input.className = `kpi-input kpi-${side}`;
      input.dataset.task = displayId;
      input.dataset.kpi = annotation.kpi;
      input.dataset.side = side;
      input.value = edit?.[side] ?? annotation[side] ?? '';
      if (edit?.[side] !== undefined) input.classList.add('edited');
      input.addEventListener('input', () => {
        setEdit(state, {
          taskDisplayId: displayId,
          kpiName: annotation.kpi,
          [side]: input.value,
        });
        handlers.onEdit();
      });
      cell.appendChild(input);
      row.appendChild(cell);
    }

    const evaluated = document.createElement('td');
    evaluated.className = 'evaluated-cell';
    if (state.lastEvaluation) {
      const value = kpiValue(state.lastEvaluation, displayId, annotation.kpi);
      evaluated.textContent = value ? `${value.current ?? '-'} / ${value.target ?? '-'}` : '-';
    } else {
      evaluated.textContent = '-';
    }
    row.appendChild(evaluated);
    table.appendChild(row);
  }
  container.appendChild(table);
}

export function showToast(container: HTMLElement, message: string, kind = 'error'): void {
  const toast = document.createElement('div');
  toast.className = `toast toast-${kind}`;
  toast.textContent = message;
  container.appendChild(toast);
  setTimeout(() => toast.remove(), 6000);
}
