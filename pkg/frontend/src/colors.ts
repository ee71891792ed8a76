import type { FacetType } from "./types.js";

// Stable four-hue palette for node left borders; all four hold WCAG-AA
// contrast against the white node body.
export const FACET_PALETTE: Record<FacetType, string> = {
  "Problem Description and RQ": "#2563eb",
  "Proposed Design and Solution": "#7c3aed",
  "Evaluation Method": "#d97706",
  "Contribution and Impact": "#059669",
};

export const EDGE_NEUTRAL = "#9ca3af";

const EDGE_RED: Rgb = [220, 38, 38]; // #dc2626
const EDGE_YELLOW: Rgb = [234, 179, 8]; // #eab308
const EDGE_GREEN: Rgb = [22, 163, 74]; // #16a34a

type Rgb = [number, number, number];

function lerp(a: Rgb, b: Rgb, t: number): Rgb {
  return [
    Math.round(a[0] + (b[0] - a[0]) * t),
    Math.round(a[1] + (b[1] - a[1]) * t),
    Math.round(a[2] + (b[2] - a[2]) * t),
  ];
}

function hex([r, g, b]: Rgb): string {
  const part = (v: number) => v.toString(16).padStart(2, "0");
  return `#${part(r)}${part(g)}${part(b)}`;
}

/**
 * Connection-strength color: unset edges render neutral gray; assessed
 * edges interpolate linearly from red (0) through yellow (0.5) to green (1).
 */
export function edgeColor(strength: number | null | undefined): string {
  if (strength === null || strength === undefined || Number.isNaN(strength)) {
    return EDGE_NEUTRAL;
  }
  const t = Math.min(1, Math.max(0, strength));
  if (t <= 0.5) {
    return hex(lerp(EDGE_RED, EDGE_YELLOW, t * 2));
  }
  return hex(lerp(EDGE_YELLOW, EDGE_GREEN, (t - 0.5) * 2));
}

export function facetColor(facet: FacetType): string {
  return FACET_PALETTE[facet];
}
