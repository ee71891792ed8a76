// Document fixtures shared by the component tests.

import type {
  BriefDoc,
  EdgeDoc,
  FacetType,
  NodeDoc,
  PaperDoc,
  ProjectDocument,
} from "../src/types.js";
import { FACET_ORDER } from "../src/types.js";

export function makeNode(id: string, facet: FacetType, overrides: Partial<NodeDoc> = {}): NodeDoc {
  return {
    id,
    facet,
    title: `Title ${id}`,
    content: `Content ${id}`,
    position: { x: 0, y: 0 },
    createdBy: "user",
    contentRevision: 1,
    suggestionCache: null,
    nodeAnalysisCache: null,
    ...overrides,
  };
}

export function makeEdge(id: string, source: string, target: string,
                         overrides: Partial<EdgeDoc> = {}): EdgeDoc {
  return { id, source, target, strength: null, suggestion: null,
           assessedAtRevision: null, ...overrides };
}

export function makePaper(corpusId: string, title: string): PaperDoc {
  return {
    corpusId,
    title,
    authors: ["A. Author"],
    year: 2023,
    abstract: "An abstract.",
    tldr: "A tldr.",
    openAccessPdfUrl: null,
    ingestState: "fallback",
    facetSummaries: null,
  };
}

export function makeProject(overrides: Partial<ProjectDocument> = {}): ProjectDocument {
  return {
    schemaVersion: 1,
    id: "project-1",
    name: "fixture project",
    revision: 10,
    nodes: [],
    edges: [],
    papers: [],
    paperIds: [],
    briefs: [],
    chatHistory: [],
    litSummaryCache: null,
    ...overrides,
  };
}

/** Four nodes (one per facet), three chain edges, and a brief citing all four. */
export function fourNodeProjectWithBrief(): ProjectDocument {
  const nodes = FACET_ORDER.map((facet, i) =>
    makeNode(`n${i + 1}`, facet, { position: { x: 40 + i * 300, y: 60 + i * 160 } }));
  const edges = [
    makeEdge("e1", "n1", "n2", { strength: 0.8, suggestion: "strong link" }),
    makeEdge("e2", "n2", "n3", { strength: 0.3 }),
    makeEdge("e3", "n3", "n4"),
  ];
  const brief: BriefDoc = {
    id: "brief-1",
    title: "Fixture brief",
    problemDescription: "Problem [1].",
    proposedDesign: "Design.",
    evaluationMethod: "Evaluation.",
    contributionImpact: "Impact.",
    literatureReferences: [
      { citationId: 1, corpusId: "p1", paperTitle: "Paper One", dangling: false },
    ],
    sourceNodeIds: ["n1", "n2", "n3", "n4"],
    sourceEdgeIds: ["e1", "e2"],
  };
  return makeProject({
    nodes,
    edges,
    papers: [makePaper("p1", "Paper One")],
    paperIds: ["p1"],
    briefs: [brief],
  });
}
