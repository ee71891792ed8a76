import { describe, expect, it } from "vitest";

import { EDGE_NEUTRAL, FACET_PALETTE, edgeColor, facetColor } from "../src/colors.js";
import { FACET_ORDER } from "../src/types.js";

function rgb(hexColor: string): [number, number, number] {
  return [
    parseInt(hexColor.slice(1, 3), 16),
    parseInt(hexColor.slice(3, 5), 16),
    parseInt(hexColor.slice(5, 7), 16),
  ];
}

function distance(a: string, b: string): number {
  const [r1, g1, b1] = rgb(a);
  const [r2, g2, b2] = rgb(b);
  return Math.hypot(r1 - r2, g1 - g2, b1 - b2);
}

describe("edgeColor gradient contract", () => {
  it("renders unset strength as neutral gray", () => {
    expect(edgeColor(null)).toBe(EDGE_NEUTRAL);
    expect(edgeColor(undefined)).toBe(EDGE_NEUTRAL);
  });

  it("hits the pure red endpoint at 0 and pure green at 1", () => {
    expect(edgeColor(0)).toBe("#dc2626");
    expect(edgeColor(1)).toBe("#16a34a");
  });

  it("passes through the yellow midpoint", () => {
    expect(edgeColor(0.5)).toBe("#eab308");
  });

  it("places 0.8 nearer green than yellow", () => {
    const color = edgeColor(0.8);
    expect(distance(color, edgeColor(1))).toBeLessThan(distance(color, edgeColor(0.5)));
  });

  it("keeps weak strengths near red and strong strengths near green", () => {
    for (const t of [0.05, 0.15, 0.25]) {
      const color = edgeColor(t);
      expect(distance(color, edgeColor(0))).toBeLessThan(distance(color, edgeColor(1)));
    }
    for (const t of [0.75, 0.9, 0.95]) {
      const color = edgeColor(t);
      expect(distance(color, edgeColor(1))).toBeLessThan(distance(color, edgeColor(0)));
    }
  });

  it("clamps out-of-range strengths to the endpoints", () => {
    expect(edgeColor(-0.4)).toBe(edgeColor(0));
    expect(edgeColor(1.7)).toBe(edgeColor(1));
  });

  it("matches the gradient snapshot", () => {
    const stops = [null, 0, 0.25, 0.5, 0.75, 0.8, 1].map((s) => ({
      strength: s,
      color: edgeColor(s),
    }));
    expect(stops).toMatchSnapshot();
  });
});

describe("facet palette", () => {
  it("assigns four distinct hues, one per facet", () => {
    const colors = FACET_ORDER.map((facet) => facetColor(facet));
    expect(new Set(colors).size).toBe(4);
    expect(Object.keys(FACET_PALETTE)).toHaveLength(4);
  });

  it("matches the palette snapshot", () => {
    expect(FACET_PALETTE).toMatchSnapshot();
  });
});
