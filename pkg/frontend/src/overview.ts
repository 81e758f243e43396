/** Cost-benefit overview bars, rendered exclusively from service responses.
 *
 * Bar widths are scaled for geometry only; every displayed figure is the
 * exact string the service returned.
 */

import type { EvaluationWire, OverviewWire } from './types.js';

const BAR_MAX = 260;

function barRow(label: string, value: string, kind: string, scale: number): HTMLElement {
  const row = document.createElement('div');
  row.className = 'bar-row';
  const tag = document.createElement('span');
  tag.className = 'bar-label';
  tag.textContent = label;
  const bar = document.createElement('span');
  bar.className = `bar bar-${kind}`;
  const magnitude = Math.abs(Number(value));
  bar.style.width = `${Math.min(Math.round(magnitude * scale), BAR_MAX)}px`;
  const amount = document.createElement('span');
  amount.className = `bar-value ${kind}-value`;
  amount.textContent = value;
  row.append(tag, bar, amount);
  return row;
}

function overviewCard(overview: OverviewWire, focal: boolean): HTMLElement {
  const card = document.createElement('div');
  card.className = 'overview-card';
  card.dataset.actor = overview.actor;
  const title = document.createElement('h3');
  title.textContent = focal ? `${overview.actor} (focal)` : overview.actor;
  card.appendChild(title);

  const magnitudes = [
    overview.currentCosts,
    overview.currentBenefits,
    overview.currentNet,
    overview.targetCosts,
    overview.targetBenefits,
    overview.targetNet,
  ].map((v) => Math.abs(Number(v)));
  const scale = BAR_MAX / Math.max(...magnitudes, 1);

  for (const [label, value, kind] of [
    ['costs (current)', overview.currentCosts, 'costs'],
    ['benefits (current)', overview.currentBenefits, 'benefits'],
    ['net (current)', overview.currentNet, 'net'],
    ['costs (target)', overview.targetCosts, 'costs'],
    ['benefits (target)', overview.targetBenefits, 'benefits'],
    ['net (target)', overview.targetNet, 'net'],
  ] as const) {
    card.appendChild(barRow(label, value, kind, scale));
  }
  return card;
}

export function renderOverview(
  container: HTMLElement,
  evaluation: EvaluationWire | null,
  selectedActor: string | null,
): void {
  container.textContent = '';
  if (!evaluation) {
    const placeholder = document.createElement('div');
    placeholder.className = 'placeholder';
    placeholder.textContent = 'Not evaluated yet';
    container.appendChild(placeholder);
    return;
  }
  const overviews = selectedActor
    ? evaluation.overviews.filter((o) => o.actor === selectedActor)
    : evaluation.overviews;
  for (const overview of overviews) {
    container.appendChild(overviewCard(overview, overview.actor === evaluation.summary.focalActor));
  }
}

/** The evaluated value of one KPI, straight from the response. */
export function kpiValue(
  evaluation: EvaluationWire,
  task: string,
  kpi: string,
): { current: string | null; target: string | null } | null {
  const entry = evaluation.values.find((v) => v.task === task && v.kpi === kpi);
  return entry ? { current: entry.current, target: entry.target } : null;
}
