// Wire-format types for the backend HTTP API. Field names mirror the
// project document schema exactly.

export type FacetType =
  | "Problem Description and RQ"
  | "Proposed Design and Solution"
  | "Evaluation Method"
  | "Contribution and Impact";

export const FACET_ORDER: FacetType[] = [
  "Problem Description and RQ",
  "Proposed Design and Solution",
  "Evaluation Method",
  "Contribution and Impact",
];

export interface Position {
  x: number;
  y: number;
}

export interface SuggestionItemDoc {
  ideaFacet: FacetType;
  action: string;
  suggestion: string;
}

export interface SuggestionSetDoc {
  items: SuggestionItemDoc[];
  generatedAtRevision: number;
}

export interface AnalysisSectionDoc {
  sectionTitle: string;
  paperTitle: string;
  keySection: string;
  connectionToIdeas: string;
  corpusId: string | null;
  dangling: boolean;
  nextSteps?: string[];
}

export interface NodeAnalysisDoc {
  mostRelevantSections: AnalysisSectionDoc[];
  suggestions: string[];
  generatedAtRevision: number;
}

export interface NodeDoc {
  id: string;
  facet: FacetType;
  title: string;
  content: string;
  position: Position;
  createdBy: "user" | "generated";
  contentRevision: number;
  suggestionCache: SuggestionSetDoc | null;
  nodeAnalysisCache: NodeAnalysisDoc | null;
}

export interface EdgeDoc {
  id: string;
  source: string;
  target: string;
  strength: number | null;
  suggestion: string | null;
  assessedAtRevision: number | null;
}

export interface FacetSummariesDoc {
  problemDescriptionAndRQ: string;
  proposedDesignAndSolution: string;
  evaluationMethod: string;
  contributionAndImpact: string;
  limitationAndFutureWork: string;
}

export interface PaperDoc {
  corpusId: string;
  title: string;
  authors: string[];
  year: number | null;
  abstract: string | null;
  tldr: string | null;
  openAccessPdfUrl: string | null;
  ingestState: "metadataOnly" | "fullText" | "fallback";
  facetSummaries: FacetSummariesDoc | null;
}

export interface BriefReferenceDoc {
  citationId: number;
  corpusId: string | null;
  paperTitle: string;
  dangling: boolean;
}

export interface BriefDoc {
  id: string;
  title: string;
  problemDescription: string;
  proposedDesign: string;
  evaluationMethod: string;
  contributionImpact: string;
  literatureReferences: BriefReferenceDoc[];
  sourceNodeIds: string[];
  sourceEdgeIds: string[];
}

export interface ChatTurnDoc {
  role: "user" | "assistant";
  text: string;
}

export interface LitSummaryDoc {
  summary: string;
  corpusIds: string[];
  generatedAtRevision: number;
}

export interface ProjectDocument {
  schemaVersion: number;
  id: string;
  name: string;
  revision: number;
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  papers: PaperDoc[];
  paperIds: string[];
  briefs: BriefDoc[];
  chatHistory: ChatTurnDoc[];
  litSummaryCache: LitSummaryDoc | null;
}

export interface ProjectListing {
  id: string;
  name: string;
  revision: number;
}

export interface GenerationResultDoc {
  generated: Array<{ ideaFacet: FacetType; title: string; content: string }>;
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  rejected: Array<Record<string, unknown>>;
}

export interface AssessmentDoc {
  connectionStrength: number;
  suggestion: string;
  assessedAtRevision: number | null;
}

export interface ChainResultDoc {
  nodes: NodeDoc[];
  edges: EdgeDoc[];
  completed: boolean;
  failedFacet: FacetType | null;
  errorCode: string | null;
}

export interface QaAnswerDoc {
  response: string;
  dangling: string[];
}

export interface AnalysisListDoc {
  items: AnalysisSectionDoc[];
}

export interface ApiEnvelope<T> {
  ok: boolean;
  data: T | null;
  error: { code: string; message: string } | null;
  revision: number | null;
}
