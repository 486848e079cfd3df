/**
 * Graph view: events as nodes on a circle, related-event edges as directed
 * arrows, agent/patient chips attached beneath each node.
 */

import { GraphEdge, GraphNode } from "../api.js";
import { escapeHtml } from "../highlight.js";

const WIDTH = 720;
const HEIGHT = 480;
const NODE_RADIUS = 46;

interface Point {
  x: number;
  y: number;
}

function layout(count: number): Point[] {
  if (count === 1) return [{ x: WIDTH / 2, y: HEIGHT / 2 }];
  const radius = Math.min(WIDTH, HEIGHT) / 2 - NODE_RADIUS - 40;
  const points: Point[] = [];
  for (let i = 0; i < count; i++) {
    const angle = (2 * Math.PI * i) / count - Math.PI / 2;
    points.push({
      x: Math.round(WIDTH / 2 + radius * Math.cos(angle)),
      y: Math.round(HEIGHT / 2 + radius * Math.sin(angle)),
    });
  }
  return points;
}

function edgePath(from: Point, to: Point): string {
  // shorten the line so the arrowhead meets the node border
  const dx = to.x - from.x;
  const dy = to.y - from.y;
  const length = Math.hypot(dx, dy) || 1;
  const trim = NODE_RADIUS + 6;
  const sx = from.x + (dx / length) * trim;
  const sy = from.y + (dy / length) * trim;
  const ex = to.x - (dx / length) * trim;
  const ey = to.y - (dy / length) * trim;
  return `M ${Math.round(sx)} ${Math.round(sy)} L ${Math.round(ex)} ${Math.round(ey)}`;
}

function nodeMarkup(node: GraphNode, at: Point): string {
  const anchor = node.anchor_texts.join(" * ");
  const chips = node.arguments
    .map(
      (a, i) =>
        `<text class="chip role-${escapeHtml(a.role)}" x="${at.x}" y="${
          at.y + NODE_RADIUS + 16 + i * 14
        }" text-anchor="middle">${escapeHtml(a.role)}: ${escapeHtml(a.text)}</text>`,
    )
    .join("");
  return (
    `<g class="node" data-index="${node.index}">` +
    `<circle cx="${at.x}" cy="${at.y}" r="${NODE_RADIUS}"></circle>` +
    `<text class="node-type" x="${at.x}" y="${at.y - 6}" text-anchor="middle">${escapeHtml(node.event_type)}</text>` +
    `<text class="node-anchor" x="${at.x}" y="${at.y + 12}" text-anchor="middle">${escapeHtml(anchor)}</text>` +
    chips +
    "</g>"
  );
}

export function graphView(graph: { nodes: GraphNode[]; edges: GraphEdge[] }): string {
  if (!graph.nodes.length) {
    return '<svg class="graph-view" viewBox="0 0 720 480" role="img"><!-- empty graph --></svg>';
  }
  const points = layout(graph.nodes.length);
  const defs =
    "<defs>" +
    '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z"></path>' +
    "</marker>" +
    "</defs>";
  const edges = graph.edges
    .map(
      (edge) =>
        `<g class="edge" data-source="${edge.source}" data-target="${edge.target}">` +
        `<path d="${edgePath(points[edge.source], points[edge.target])}" marker-end="url(#arrow)"></path>` +
        `<title>${escapeHtml(edge.label)}</title>` +
        "</g>",
    )
    .join("");
  const nodes = graph.nodes.map((node, i) => nodeMarkup(node, points[i])).join("");
  return (
    `<svg class="graph-view" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img">` +
    defs +
    edges +
    nodes +
    "</svg>"
  );
}
