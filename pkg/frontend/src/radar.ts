/** Radial radar view: one slice per actor, the co-created solution at the center. */

import type { RadarActorWire, RadarWire } from './types.js';

const SIZE = 560;
const CENTER = SIZE / 2;
const RADIUS = CENTER - 10;
const SOLUTION_RADIUS = 72;

const SVG_NS = 'http://www.w3.org/2000/svg';

const ROLE_FILL: Record<string, string> = {
  user: '#dbeafe',
  focal: '#fde68a',
  partner: '#dcfce7',
};

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function polar(angle: number, radius: number): [number, number] {
  return [CENTER + radius * Math.cos(angle), CENTER + radius * Math.sin(angle)];
}

function slicePath(start: number, end: number): string {
  const [x1, y1] = polar(start, SOLUTION_RADIUS);
  const [x2, y2] = polar(start, RADIUS);
  const [x3, y3] = polar(end, RADIUS);
  const [x4, y4] = polar(end, SOLUTION_RADIUS);
  const large = end - start > Math.PI ? 1 : 0;
  return (
    `M ${x1} ${y1} L ${x2} ${y2} ` +
    `A ${RADIUS} ${RADIUS} 0 ${large} 1 ${x3} ${y3} ` +
    `L ${x4} ${y4} A ${SOLUTION_RADIUS} ${SOLUTION_RADIUS} 0 ${large} 0 ${x1} ${y1} Z`
  );
}

function sliceLabels(actor: RadarActorWire): string[] {
  const lines = [`${actor.name} (${actor.role})`];
  for (const vp of actor.valuePropositions) {
    lines.push(`VP: ${vp.name}`);
    for (const activity of vp.activities) {
      lines.push(`CA: ${activity.name}`);
      for (const cost of activity.costs) lines.push(`C: ${cost}`);
      for (const benefit of activity.benefits) lines.push(`B: ${benefit}`);
    }
  }
  for (const cost of actor.actorCosts ?? []) lines.push(`C: ${cost}`);
  for (const benefit of actor.actorBenefits ?? []) lines.push(`B: ${benefit}`);
  return lines;
}

/** Render the radar; a missing radar renders a placeholder instead. */
export function renderRadar(container: HTMLElement, radar: RadarWire | null): void {
  container.textContent = '';
  if (!radar) {
    const placeholder = document.createElement('div');
    placeholder.className = 'placeholder';
    placeholder.textContent = 'No radar loaded';
    container.appendChild(placeholder);
    return;
  }

  const svg = svgEl('svg', {
    viewBox: `0 0 ${SIZE} ${SIZE}`,
    class: 'radar-svg',
    role: 'img',
  });

  const n = radar.actors.length;
  radar.actors.forEach((actor, i) => {
    const start = (2 * Math.PI * i) / n - Math.PI / 2;
    const end = (2 * Math.PI * (i + 1)) / n - Math.PI / 2;
    const group = svgEl('g', { class: 'radar-slice' });
    group.dataset.actor = actor.name;
    if (n === 1) {
      // a single actor owns the full circle
      group.appendChild(
        svgEl('circle', {
          cx: String(CENTER),
          cy: String(CENTER),
          r: String(RADIUS),
          fill: ROLE_FILL[actor.role] ?? '#eee',
          stroke: '#555',
        }),
      );
    } else {
      group.appendChild(
        svgEl('path', {
          d: slicePath(start, end),
          fill: ROLE_FILL[actor.role] ?? '#eee',
          stroke: '#555',
        }),
      );
    }
    const mid = (start + end) / 2;
    const labels = sliceLabels(actor);
    const baseRadius = SOLUTION_RADIUS + 24;
    const step = (RADIUS - SOLUTION_RADIUS - 40) / Math.max(labels.length - 1, 1);
    labels.forEach((line, j) => {
      const [x, y] = polar(mid, baseRadius + j * step);
      const text = svgEl('text', {
        x: String(x),
        y: String(y),
        'text-anchor': 'middle',
        class: j === 0 ? 'radar-actor-name' : 'radar-entry',
      });
      text.textContent = line;
      group.appendChild(text);
    });
    svg.appendChild(group);
  });

  svg.appendChild(
    svgEl('circle', {
      cx: String(CENTER),
      cy: String(CENTER),
      r: String(SOLUTION_RADIUS),
      fill: '#fff',
      stroke: '#333',
    }),
  );
  const solution = svgEl('text', {
    x: String(CENTER),
    y: String(CENTER),
    'text-anchor': 'middle',
    class: 'radar-solution',
  });
  solution.textContent = radar.solution;
  svg.appendChild(solution);
  container.appendChild(svg);

  if (!radar.solution) {
    const badge = document.createElement('div');
    badge.className = 'validation-badge';
    badge.textContent = 'solution is empty';
    container.appendChild(badge);
  }
}
