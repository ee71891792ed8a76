// Thin HTTP client over the backend JSON API. Every response is an
// {ok, data, error, revision} envelope; failures become ApiError with the
// backend's stable error code.

import type {
  AnalysisListDoc,
  ApiEnvelope,
  AssessmentDoc,
  BriefDoc,
  ChainResultDoc,
  FacetType,
  GenerationResultDoc,
  LitSummaryDoc,
  NodeAnalysisDoc,
  NodeDoc,
  EdgeDoc,
  PaperDoc,
  Position,
  ProjectDocument,
  ProjectListing,
  QaAnswerDoc,
  SuggestionSetDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface ApiResult<T> {
  data: T;
  revision: number | null;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<ApiResult<T>> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
        body: body !== undefined ? JSON.stringify(body) : undefined,
      });
    } catch (err) {
      throw new ApiError("NetworkError", `request failed: ${String(err)}`, 0);
    }
    let envelope: ApiEnvelope<T>;
    try {
      envelope = (await response.json()) as ApiEnvelope<T>;
    } catch {
      throw new ApiError("BadEnvelope", `non-JSON response (${response.status})`, response.status);
    }
    if (!envelope.ok || envelope.error) {
      const error = envelope.error ?? { code: "UnknownError", message: "unknown error" };
      throw new ApiError(error.code, error.message, response.status);
    }
    return { data: envelope.data as T, revision: envelope.revision };
  }

  // projects
  listProjects() {
    return this.request<ProjectListing[]>("GET", "/projects");
  }
  createProject(name: string) {
    return this.request<ProjectDocument>("POST", "/projects", { name });
  }
  getProject(projectId: string) {
    return this.request<ProjectDocument>("GET", `/projects/${projectId}`);
  }
  renameProject(projectId: string, name: string) {
    return this.request<ProjectDocument>("PATCH", `/projects/${projectId}`, { name });
  }
  deleteProject(projectId: string) {
    return this.request<{ deleted: string }>("DELETE", `/projects/${projectId}`);
  }

  // canvas
  createNode(projectId: string, fields: { facet?: FacetType; title?: string; content?: string; position?: Position }) {
    return this.request<NodeDoc>("POST", `/projects/${projectId}/nodes`, fields);
  }
  updateNode(projectId: string, nodeId: string,
             fields: { facet?: FacetType; title?: string; content?: string; position?: Position }) {
    return this.request<NodeDoc>("PATCH", `/projects/${projectId}/nodes/${nodeId}`, fields);
  }
  deleteNode(projectId: string, nodeId: string) {
    return this.request<{ deleted: string }>("DELETE", `/projects/${projectId}/nodes/${nodeId}`);
  }
  createEdge(projectId: string, source: string, target: string) {
    return this.request<EdgeDoc>("POST", `/projects/${projectId}/edges`, { source, target });
  }
  deleteEdge(projectId: string, edgeId: string) {
    return this.request<{ deleted: string }>("DELETE", `/projects/${projectId}/edges/${edgeId}`);
  }

  // generation
  nodeSuggestions(nodeId: string) {
    return this.request<SuggestionSetDoc>("POST", `/nodes/${nodeId}/suggestions`);
  }
  generateNodes(nodeId: string, action: string, userPrompt?: string) {
    return this.request<GenerationResultDoc>("POST", `/nodes/${nodeId}/generate`,
      { action, userPrompt: userPrompt ?? null });
  }
  assessEdge(edgeId: string) {
    return this.request<AssessmentDoc>("POST", `/edges/${edgeId}/assess`);
  }
  generateBrief(projectId: string, nodeIds: string[]) {
    return this.request<BriefDoc>("POST", `/projects/${projectId}/brief`, { nodeIds });
  }
  deleteBrief(projectId: string, briefId: string) {
    return this.request<{ deleted: string }>("DELETE", `/projects/${projectId}/briefs/${briefId}`);
  }

  // papers
  searchPapers(projectId: string, query: string, limit?: number) {
    return this.request<PaperDoc[]>("POST", `/projects/${projectId}/papers/search`, { query, limit });
  }
  recommendPapers(projectId: string) {
    return this.request<PaperDoc[]>("POST", `/projects/${projectId}/papers/recommend`, {});
  }
  ingestPaper(projectId: string, paper: Partial<PaperDoc> & { corpusId: string }) {
    return this.request<PaperDoc>("POST", `/projects/${projectId}/papers/ingest`, paper);
  }
  removePaper(projectId: string, corpusId: string) {
    return this.request<{ deleted: string }>("DELETE", `/projects/${projectId}/papers/${corpusId}`);
  }

  // literature review
  litSummary(projectId: string) {
    return this.request<LitSummaryDoc>("POST", `/projects/${projectId}/lit/summary`);
  }
  litAnalysis(projectId: string) {
    return this.request<AnalysisListDoc>("POST", `/projects/${projectId}/lit/analysis`);
  }
  nodeLitAnalysis(nodeId: string) {
    return this.request<NodeAnalysisDoc>("POST", `/nodes/${nodeId}/lit-analysis`);
  }

  // chat and chains
  qa(projectId: string, prompt: string) {
    return this.request<QaAnswerDoc>("POST", `/projects/${projectId}/qa`, { prompt });
  }
  chain(projectId: string, suggestionText: string, position: Position, startFacet?: FacetType) {
    return this.request<ChainResultDoc>("POST", `/projects/${projectId}/chain`,
      { suggestionText, position, startFacet: startFacet ?? null });
  }
}
