import { describe, expect, it } from "vitest";

import { SEMANTIC_ZOOM_THRESHOLD, ViewState, ZOOM_MAX, ZOOM_MIN } from "../src/view.js";

describe("ViewState", () => {
  it("clamps zoom into [0.1, 3.0]", () => {
    const view = new ViewState();
    expect(view.setZoom(0.01)).toBe(ZOOM_MIN);
    expect(view.setZoom(12)).toBe(ZOOM_MAX);
    expect(view.setZoom(1.4)).toBe(1.4);
  });

  it("collapses below the semantic-zoom threshold only", () => {
    const view = new ViewState();
    view.setZoom(SEMANTIC_ZOOM_THRESHOLD - 0.01);
    expect(view.collapsed).toBe(true);
    view.setZoom(SEMANTIC_ZOOM_THRESHOLD);
    expect(view.collapsed).toBe(false);
  });

  it("prunes selection to live nodes", () => {
    const view = new ViewState();
    view.toggleSelect("a");
    view.toggleSelect("b");
    view.toggleSelect("c");
    view.pruneSelection(["a", "c"]);
    expect([...view.selection].sort()).toEqual(["a", "c"]);
  });

  it("toggleSelect adds then removes", () => {
    const view = new ViewState();
    view.toggleSelect("a");
    expect(view.selection.has("a")).toBe(true);
    view.toggleSelect("a");
    expect(view.selection.has("a")).toBe(false);
  });

  it("accumulates pan offsets", () => {
    const view = new ViewState();
    view.panBy(10, 5);
    view.panBy(-4, 2);
    expect(view.pan).toEqual({ x: 6, y: 7 });
  });
});
