// Inline citation chips: generated text cites collected papers with
// "@ref[<corpusId>]" tags. Parsing is lossless; malformed near-tags stay
// plain text.

import type { PaperDoc } from "./types.js";

const TAG_PATTERN = /@ref\[([^\[\]]+)\]/g;

export type Segment =
  | { kind: "text"; text: string }
  | { kind: "cite"; corpusId: string; surface: string };

export function parseCitationTags(text: string): Segment[] {
  const segments: Segment[] = [];
  let pos = 0;
  TAG_PATTERN.lastIndex = 0;
  for (const match of text.matchAll(TAG_PATTERN)) {
    const index = match.index ?? 0;
    if (index > pos) {
      segments.push({ kind: "text", text: text.slice(pos, index) });
    }
    segments.push({ kind: "cite", corpusId: match[1], surface: match[0] });
    pos = index + match[0].length;
  }
  if (pos < text.length || segments.length === 0) {
    segments.push({ kind: "text", text: text.slice(pos) });
  }
  return segments;
}

export interface ChipHandlers {
  onOpenPaper?: (corpusId: string) => void;
}

/**
 * Render text with citation chips. Resolved chips show the paper title and
 * open the paper card on click; dangling chips are flagged, never dropped.
 */
export function renderWithCitations(
  text: string,
  papers: Map<string, PaperDoc>,
  handlers: ChipHandlers = {},
): DocumentFragment {
  const fragment = document.createDocumentFragment();
  for (const segment of parseCitationTags(text)) {
    if (segment.kind === "text") {
      fragment.appendChild(document.createTextNode(segment.text));
      continue;
    }
    const paper = papers.get(segment.corpusId);
    const chip = document.createElement("span");
    chip.className = paper ? "citation-chip" : "citation-chip dangling";
    chip.dataset.corpusId = segment.corpusId;
    chip.textContent = paper ? `📄 ${paper.title}` : segment.surface;
    if (paper) {
      chip.title = paper.title;
      chip.addEventListener("click", () => handlers.onOpenPaper?.(segment.corpusId));
    } else {
      chip.title = "Cited paper is not in the collection";
    }
    fragment.appendChild(chip);
  }
  return fragment;
}

export function paperIndex(papers: PaperDoc[]): Map<string, PaperDoc> {
  return new Map(papers.map((p) => [p.corpusId, p]));
}
