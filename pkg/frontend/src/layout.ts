/** Deterministic initial node placement, layered by solve order. */

import type { GraphDocument } from "./api.js";

export interface Point {
  x: number;
  y: number;
}

export const COLUMN_WIDTH = 170;
export const ROW_HEIGHT = 90;
export const MARGIN = 70;

/**
 * Solved nodes form one column per solve order, left to right; unresolved
 * nodes (residual cluster) sit in a single rightmost band.  Within a
 * column nodes are sorted by name so placement is reproducible.
 */
export function layeredLayout(doc: GraphDocument): Map<string, Point> {
  const orders = [...new Set(doc.nodes.map((n) => n.solve_order).filter((o): o is number => o !== null))];
  orders.sort((a, b) => a - b);
  const columnOf = new Map<number, number>(orders.map((order, index) => [order, index]));
  const unresolvedColumn = orders.length;

  const byColumn = new Map<number, string[]>();
  for (const node of doc.nodes) {
    const column = node.solve_order === null ? unresolvedColumn : columnOf.get(node.solve_order)!;
    const bucket = byColumn.get(column) ?? [];
    bucket.push(node.name);
    byColumn.set(column, bucket);
  }

  const positions = new Map<string, Point>();
  for (const [column, names] of byColumn) {
    names.sort();
    names.forEach((name, row) => {
      positions.set(name, {
        x: MARGIN + column * COLUMN_WIDTH,
        y: MARGIN + row * ROW_HEIGHT,
      });
    });
  }
  return positions;
}

/** Re-seed layout for a new graph while keeping nodes the user dragged. */
export function mergeLayout(
  doc: GraphDocument,
  previous: Map<string, Point>,
): Map<string, Point> {
  const fresh = layeredLayout(doc);
  for (const [name, point] of previous) {
    if (fresh.has(name)) {
      fresh.set(name, point);
    }
  }
  return fresh;
}
