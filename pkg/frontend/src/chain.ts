// Drag-to-chain: dropping a suggestion on the canvas materializes it as a
// vertical chain of linked nodes via the /chain endpoint.

import type { ApiClient } from "./api.js";
import { NODE_HEIGHT, NODE_WIDTH } from "./canvas.js";
import type { ChainResultDoc, FacetType, Position } from "./types.js";

export interface Rect {
  x: number;
  y: number;
  width: number;
  height: number;
}

const STEP_X = 130;
const STEP_Y = 90;
const MAX_RINGS = 12;

function intersects(point: Position, rect: Rect): boolean {
  return (
    point.x < rect.x + rect.width &&
    point.x + NODE_WIDTH > rect.x &&
    point.y < rect.y + rect.height &&
    point.y + NODE_HEIGHT > rect.y
  );
}

function occupied(point: Position, rects: Rect[]): boolean {
  return rects.some((rect) => intersects(point, rect));
}

/**
 * Nearest free spot for a dropped chain: if the drop point would overlap an
 * existing node, probe outward ring by ring (deterministic order) until a
 * free position is found.
 */
export function resolveDropPoint(drop: Position, rects: Rect[]): Position {
  if (!occupied(drop, rects)) {
    return drop;
  }
  for (let ring = 1; ring <= MAX_RINGS; ring += 1) {
    for (let dy = -ring; dy <= ring; dy += 1) {
      for (let dx = -ring; dx <= ring; dx += 1) {
        if (Math.max(Math.abs(dx), Math.abs(dy)) !== ring) {
          continue;
        }
        const candidate = { x: drop.x + dx * STEP_X, y: drop.y + dy * STEP_Y };
        if (!occupied(candidate, rects)) {
          return candidate;
        }
      }
    }
  }
  return drop;
}

export interface ChainCallbacks {
  onStarted?(): void;
  onPartial?(result: ChainResultDoc): void;
  onCompleted?(result: ChainResultDoc): void;
}

export async function dragSuggestionToCanvas(
  client: ApiClient,
  projectId: string,
  suggestion: string,
  dropPoint: Position,
  occupiedRects: Rect[],
  callbacks: ChainCallbacks = {},
  startFacet?: FacetType,
): Promise<ChainResultDoc> {
  const target = resolveDropPoint(dropPoint, occupiedRects);
  callbacks.onStarted?.();
  const { data } = await client.chain(projectId, suggestion, target, startFacet);
  if (data.completed) {
    callbacks.onCompleted?.(data);
  } else {
    callbacks.onPartial?.(data);
  }
  return data;
}

export function nodeRects(nodes: Array<{ position: Position }>): Rect[] {
  return nodes.map((node) => ({
    x: node.position.x,
    y: node.position.y,
    width: NODE_WIDTH,
    height: NODE_HEIGHT,
  }));
}
