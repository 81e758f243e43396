/** Pool/lane view of the collaboration model with annotation badges.
 *
 * Pools stack in model order; tasks keep their within-pool order; message
 * flows are drawn as arrows across lanes. Annotated tasks show the full
 * badge set (actor, type, goal, KPI, current, target) with formula text
 * rendered verbatim as the service sent it.
 */

import type { ModelWire, NodeWire } from './types.js';

const NODE_W = 168;
const EVENT_R = 16;
const GAP_X = 26;
const LANE_PAD = 18;
const LABEL_W = 118;
const BADGE_LINE = 15;
const NAME_H = 34;

const SVG_NS = 'http://www.w3.org/2000/svg';

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

const hasBadge = (node: NodeWire): boolean => Boolean(node.annotation && node.annotation.kpi);

function badgeLines(node: NodeWire): string[] {
  const annotation = node.annotation!;
  return [
    `Actor: ${annotation.actor}`,
    `Type: ${annotation.type}`,
    `Goal: ${annotation.goal || '-'}`,
    `KPI: ${annotation.kpi}`,
    `Current: ${annotation.current ?? '-'}`,
    `Target: ${annotation.target ?? '-'}`,
  ];
}

function nodeHeight(node: NodeWire): number {
  return hasBadge(node) ? NAME_H + 6 * BADGE_LINE + 10 : NAME_H + 12;
}

/** Render the process view; positions of all node centers are returned
 * so callers (and the message-flow pass) can anchor arrows. */
export function renderProcess(container: HTMLElement, model: ModelWire | null): void {
  container.textContent = '';
  if (!model) {
    const placeholder = document.createElement('div');
    placeholder.className = 'placeholder';
    placeholder.textContent = 'No model loaded';
    container.appendChild(placeholder);
    return;
  }

  const laneHeights = model.pools.map(
    (pool) => Math.max(...pool.nodes.map(nodeHeight), 40) + 2 * LANE_PAD,
  );
  const width =
    LABEL_W +
    Math.max(
      ...model.pools.map(
        (pool) =>
          pool.nodes.reduce(
            (x, node) => x + (node.kind === 'task' ? NODE_W : 2 * EVENT_R) + GAP_X,
            GAP_X,
          ),
      ),
      200,
    );
  const height = laneHeights.reduce((a, b) => a + b, 0);

  const svg = svgEl('svg', { viewBox: `0 0 ${width} ${height}`, class: 'process-svg' });
  const defs = svgEl('defs', {});
  const marker = svgEl('marker', {
    id: 'arrow',
    viewBox: '0 0 10 10',
    refX: '9',
    refY: '5',
    markerWidth: '7',
    markerHeight: '7',
    orient: 'auto-start-reverse',
  });
  marker.appendChild(svgEl('path', { d: 'M 0 0 L 10 5 L 0 10 z', fill: '#333' }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const centers = new Map<string, { x: number; y: number }>();
  let laneY = 0;
  model.pools.forEach((pool, p) => {
    const laneH = laneHeights[p];
    const lane = svgEl('g', { class: 'lane' });
    lane.dataset.pool = pool.name;
    lane.appendChild(
      svgEl('rect', {
        x: '0',
        y: String(laneY),
        width: String(width),
        height: String(laneH),
        class: 'lane-box',
      }),
    );
    const label = svgEl('text', {
      x: '12',
      y: String(laneY + laneH / 2),
      class: 'lane-label',
    });
    label.textContent = pool.name + (pool.role === 'focal' ? ' ★' : '');
    lane.appendChild(label);

    let x = LABEL_W + GAP_X;
    const midY = laneY + laneH / 2;
    for (const node of pool.nodes) {
      if (node.kind === 'task') {
        const h = nodeHeight(node);
        const top = midY - h / 2;
        const group = svgEl('g', {
          class: hasBadge(node) ? 'task annotated' : 'task',
        });
        group.dataset.node = node.id;
        if (node.displayId) group.dataset.displayId = node.displayId;
        group.dataset.annotated = hasBadge(node) ? 'true' : 'false';
        group.appendChild(
          svgEl('rect', {
            x: String(x),
            y: String(top),
            width: String(NODE_W),
            height: String(h),
            rx: '6',
            class: 'task-box',
          }),
        );
        const name = svgEl('text', {
          x: String(x + NODE_W / 2),
          y: String(top + 20),
          'text-anchor': 'middle',
          class: 'task-name',
        });
        name.textContent = node.displayId ? `${node.displayId} ${node.name}` : node.name;
        group.appendChild(name);
        if (hasBadge(node)) {
          badgeLines(node).forEach((line, i) => {
            const text = svgEl('text', {
              x: String(x + 8),
              y: String(top + NAME_H + (i + 1) * BADGE_LINE - 4),
              class: 'badge',
            });
            text.textContent = line;
            group.appendChild(text);
          });
        }
        lane.appendChild(group);
        centers.set(node.id, { x: x + NODE_W / 2, y: midY });
        x += NODE_W + GAP_X;
      } else {
        const cx = x + EVENT_R;
        lane.appendChild(
          svgEl('circle', {
            cx: String(cx),
            cy: String(midY),
            r: String(EVENT_R),
            class: node.kind === 'startEvent' ? 'event start-event' : 'event end-event',
          }),
        );
        centers.set(node.id, { x: cx, y: midY });
        x += 2 * EVENT_R + GAP_X;
      }
    }

    for (const flow of pool.sequenceFlows) {
      const from = centers.get(flow.source);
      const to = centers.get(flow.target);
      if (!from || !to) continue;
      const x1 = from.x + (to.x > from.x ? NODE_W / 2 : -NODE_W / 2);
      const x2 = to.x + (to.x > from.x ? -NODE_W / 2 - 4 : NODE_W / 2 + 4);
      lane.appendChild(
        svgEl('line', {
          x1: String(Math.min(Math.max(x1, 0), width)),
          y1: String(from.y),
          x2: String(x2),
          y2: String(to.y),
          class: 'sequence-flow',
          'marker-end': 'url(#arrow)',
        }),
      );
    }
    svg.appendChild(lane);
    laneY += laneH;
  });

  for (const flow of model.messageFlows) {
    const from = centers.get(flow.source);
    const to = centers.get(flow.target);
    if (!from || !to) {
      const badge = document.createElement('div');
      badge.className = 'unknown-element';
      badge.textContent = `message flow ${flow.id} references an unknown element`;
      container.appendChild(badge);
      continue;
    }
    const up = to.y < from.y;
    const y1 = from.y + (up ? -NAME_H : NAME_H);
    const y2 = to.y + (up ? NAME_H : -NAME_H) + (up ? 6 : -6);
    svg.appendChild(
      svgEl('line', {
        x1: String(from.x),
        y1: String(y1),
        x2: String(to.x),
        y2: String(y2),
        class: 'message-flow',
        'marker-end': 'url(#arrow)',
      }),
    );
  }
  container.appendChild(svg);
}
