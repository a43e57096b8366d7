/**
 * Pure markup builders.  Everything here turns state into strings so the
 * rendering logic is testable without a browser; dom.ts owns the actual
 * element wiring.
 */

import type { GraphDocument, KbFolder, ReleaseCandidate } from "./api.js";
import type { Point } from "./layout.js";

export const NODE_RX = 42;
export const NODE_RY = 24;

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const ARROW_DEFS = `<defs>
<marker id="arrow-head" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse">
  <path d="M 0 0 L 10 5 L 0 10 z" fill="#334"/>
</marker>
</defs>`;

/** Edge endpoints pulled back to the ellipse borders. */
function trim(a: Point, b: Point): { x1: number; y1: number; x2: number; y2: number } {
  const dx = b.x - a.x;
  const dy = b.y - a.y;
  const length = Math.hypot(dx, dy) || 1;
  const ux = dx / length;
  const uy = dy / length;
  const offset = NODE_RX + 4;
  return {
    x1: a.x + ux * offset,
    y1: a.y + uy * offset,
    x2: b.x - ux * offset,
    y2: b.y - uy * offset,
  };
}

/** The three relation kinds use three distinct stroke/marker styles. */
export function arcMarkup(kind: string, tail: string, head: string, a: Point, b: Point): string {
  const { x1, y1, x2, y2 } = trim(a, b);
  const ident = `data-tail="${escapeXml(tail)}" data-head="${escapeXml(head)}" data-kind="${kind}"`;
  const line = `x1="${x1.toFixed(1)}" y1="${y1.toFixed(1)}" x2="${x2.toFixed(1)}" y2="${y2.toFixed(1)}"`;
  if (kind === "directed") {
    return `<line class="arc arc-directed" ${ident} ${line} stroke="#334" stroke-width="1.6" marker-end="url(#arrow-head)"/>`;
  }
  if (kind === "bidirected") {
    return `<line class="arc arc-bidirected" ${ident} ${line} stroke="#a33" stroke-width="1.6" marker-start="url(#arrow-head)" marker-end="url(#arrow-head)"/>`;
  }
  return `<line class="arc arc-undirected" ${ident} ${line} stroke="#667" stroke-width="1.6" stroke-dasharray="6 4"/>`;
}

export function nodeMarkup(
  name: string,
  order: number | null,
  point: Point,
  selected: boolean,
): string {
  const classes = ["node"];
  if (order === null) classes.push("node-unresolved");
  if (selected) classes.push("node-selected");
  const badge = order === null ? "?" : String(order);
  const outline = order === null ? ' stroke-dasharray="5 3"' : "";
  const fill = selected ? "#dce8ff" : "#f6f8fc";
  return (
    `<g class="${classes.join(" ")}" data-node="${escapeXml(name)}" transform="translate(${point.x},${point.y})">` +
    `<ellipse rx="${NODE_RX}" ry="${NODE_RY}" fill="${fill}" stroke="#334" stroke-width="1.4"${outline}/>` +
    `<text text-anchor="middle" dy="5" font-size="13">${escapeXml(name)}</text>` +
    `<text class="order-badge" x="${NODE_RX - 6}" y="${-NODE_RY + 8}" font-size="9" fill="#778">${badge}</text>` +
    `</g>`
  );
}

export function graphSvg(
  doc: GraphDocument,
  positions: Map<string, Point>,
  selection: Set<string>,
  width = 960,
  height = 640,
): string {
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    ARROW_DEFS,
  ];
  for (const arc of doc.arcs) {
    const a = positions.get(arc.tail);
    const b = positions.get(arc.head);
    if (a && b) {
      parts.push(arcMarkup(arc.kind, arc.tail, arc.head, a, b));
    }
  }
  for (const node of doc.nodes) {
    const point = positions.get(node.name);
    if (point) {
      parts.push(nodeMarkup(node.name, node.solve_order, point, selection.has(node.name)));
    }
  }
  parts.push("</svg>");
  return parts.join("\n");
}

export interface DialogState {
  description: string;
  candidates: ReleaseCandidate[];
  rejection: string | null;
}

export function dialogMarkup(dialog: DialogState | null): string {
  if (dialog === null) {
    return "";
  }
  const rows = dialog.candidates
    .map((candidate) => {
      const flag = candidate.valid ? "releasable" : "not releasable";
      const cls = candidate.valid ? "candidate valid" : "candidate invalid";
      return (
        `<li class="${cls}" data-release="${escapeXml(candidate.equation)}">` +
        `<code>${escapeXml(candidate.equation)}</code> <em>${flag}</em></li>`
      );
    })
    .join("\n");
  const rejection = dialog.rejection
    ? `<p class="rejection">${escapeXml(dialog.rejection)}</p>`
    : "";
  return (
    `<div class="release-dialog">` +
    `<h3>Model would become over-constrained</h3>` +
    `<p>${escapeXml(dialog.description)} needs one equation released.</p>` +
    `<ul>${rows}</ul>${rejection}` +
    `<button data-cancel-release>Cancel</button></div>`
  );
}

export function treeMarkup(folder: KbFolder, prefix = ""): string {
  const folders = Object.keys(folder.folders)
    .sort()
    .map((name) => {
      const path = prefix ? `${prefix}/${name}` : name;
      return (
        `<li class="folder" data-folder="${escapeXml(path)}"><span>${escapeXml(name)}</span>` +
        treeMarkup(folder.folders[name], path) +
        `</li>`
      );
    });
  const mechanisms = folder.mechanisms.map((mechanism) => {
    const path = prefix ? `${prefix}/${mechanism.name}` : mechanism.name;
    const title = escapeXml(mechanism.description || mechanism.participants.join(", "));
    return (
      `<li class="mechanism" draggable="true" data-mechanism="${escapeXml(path)}" title="${title}">` +
      `${escapeXml(mechanism.name)}<small> (${escapeXml(mechanism.participants.join(", "))})</small></li>`
    );
  });
  return `<ul>${[...folders, ...mechanisms].join("\n")}</ul>`;
}
