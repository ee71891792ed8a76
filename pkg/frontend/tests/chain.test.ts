import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { NODE_HEIGHT, NODE_WIDTH } from "../src/canvas.js";
import { dragSuggestionToCanvas, nodeRects, resolveDropPoint } from "../src/chain.js";
import type { ChainResultDoc } from "../src/types.js";
import { makeNode } from "./fixtures.js";

function envelopeResponse(data: unknown): Response {
  return new Response(JSON.stringify({ ok: true, data, error: null, revision: 1 }), {
    status: 200,
    headers: { "Content-Type": "application/json" },
  });
}

describe("resolveDropPoint", () => {
  const rects = [{ x: 100, y: 100, width: NODE_WIDTH, height: NODE_HEIGHT }];

  it("keeps a free drop point unchanged", () => {
    expect(resolveDropPoint({ x: 900, y: 900 }, rects)).toEqual({ x: 900, y: 900 });
  });

  it("offsets an occupied drop point to nearby free space", () => {
    const resolved = resolveDropPoint({ x: 120, y: 120 }, rects);
    expect(resolved).not.toEqual({ x: 120, y: 120 });
    const overlaps =
      resolved.x < rects[0].x + rects[0].width &&
      resolved.x + NODE_WIDTH > rects[0].x &&
      resolved.y < rects[0].y + rects[0].height &&
      resolved.y + NODE_HEIGHT > rects[0].y;
    expect(overlaps).toBe(false);
  });

  it("is deterministic", () => {
    const a = resolveDropPoint({ x: 120, y: 120 }, rects);
    const b = resolveDropPoint({ x: 120, y: 120 }, rects);
    expect(a).toEqual(b);
  });
});

describe("dragSuggestionToCanvas", () => {
  it("posts to the chain endpoint and reports completion", async () => {
    const result: ChainResultDoc = {
      nodes: [makeNode("c1", "Evaluation Method"),
              makeNode("c2", "Contribution and Impact")],
      edges: [],
      completed: true,
      failedFacet: null,
      errorCode: null,
    };
    const calls: Array<{ url: string; body: unknown }> = [];
    const client = new ApiClient("http://api", async (url, init) => {
      calls.push({ url, body: JSON.parse(String(init?.body)) });
      return envelopeResponse(result);
    });
    let completed: ChainResultDoc | null = null;
    const data = await dragSuggestionToCanvas(client, "p1", "evaluate styles",
      { x: 10, y: 10 }, [], { onCompleted: (r) => { completed = r; } });
    expect(data.nodes).toHaveLength(2);
    expect(completed).not.toBeNull();
    expect(calls[0].url).toBe("http://api/projects/p1/chain");
    expect(calls[0].body).toMatchObject({ suggestionText: "evaluate styles" });
  });

  it("raises a partial-chain callback on mid-chain failure", async () => {
    const result: ChainResultDoc = {
      nodes: [makeNode("c1", "Evaluation Method")],
      edges: [],
      completed: false,
      failedFacet: "Contribution and Impact",
      errorCode: "MalformedResponse",
    };
    const client = new ApiClient("http://api", async () => envelopeResponse(result));
    let partial: ChainResultDoc | null = null;
    await dragSuggestionToCanvas(client, "p1", "s", { x: 0, y: 0 }, [],
      { onPartial: (r) => { partial = r; } });
    expect(partial).not.toBeNull();
    expect(partial!.failedFacet).toBe("Contribution and Impact");
  });

  it("re-targets the chain when dropped on an occupied area", async () => {
    const occupied = nodeRects([makeNode("n1", "Evaluation Method",
      { position: { x: 0, y: 0 } })]);
    let sent: { x: number; y: number } | null = null;
    const client = new ApiClient("http://api", async (_url, init) => {
      sent = JSON.parse(String(init?.body)).position;
      return envelopeResponse({ nodes: [], edges: [], completed: true,
                                failedFacet: null, errorCode: null });
    });
    await dragSuggestionToCanvas(client, "p1", "s", { x: 10, y: 10 }, occupied);
    expect(sent).not.toEqual({ x: 10, y: 10 });
  });
});
