// Application wiring: loads the project over the HTTP API, renders the
// canvas and panels, and maps every user action to exactly one API call.
// Mutations refetch the project by revision, so the scene stays a pure
// projection of the server document.

import { ApiClient, ApiError } from "./api.js";
import { renderCanvas, NODE_WIDTH } from "./canvas.js";
import { dragSuggestionToCanvas, nodeRects } from "./chain.js";
import { renderBriefPanel, renderLiteraturePanel } from "./panels.js";
import type {
  AnalysisSectionDoc,
  FacetType,
  PaperDoc,
  ProjectDocument,
} from "./types.js";
import { ViewState } from "./view.js";

const POLL_INTERVAL_MS = 2000;

export class App {
  private project: ProjectDocument | null = null;
  private view = new ViewState();
  private searchResults: PaperDoc[] = [];
  private analysisItems: AnalysisSectionDoc[] = [];
  private degraded = false;
  private pendingNodeIds = new Set<string>();
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
  ) {}

  async start(): Promise<void> {
    const { data: listings } = await this.client.listProjects();
    if (listings.length > 0) {
      this.project = (await this.client.getProject(listings[0].id)).data;
    } else {
      this.project = (await this.client.createProject("Untitled project")).data;
    }
    this.render();
  }

  private async refresh(): Promise<void> {
    if (!this.project) {
      return;
    }
    try {
      this.project = (await this.client.getProject(this.project.id)).data;
      this.degraded = false;
    } catch {
      this.degraded = true; // keep the last loaded scene; never crash
    }
    this.view.pruneSelection(this.project?.nodes.map((n) => n.id) ?? []);
    this.render();
  }

  /** Run one API mutation with busy-marking and a revision refresh after. */
  private async act(nodeId: string | null, operation: () => Promise<unknown>): Promise<void> {
    if (nodeId) {
      if (this.pendingNodeIds.has(nodeId)) {
        return; // one in-flight generation per node widget
      }
      this.pendingNodeIds.add(nodeId);
      this.startPolling();
      this.render();
    }
    try {
      await operation();
    } catch (err) {
      this.toast(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    } finally {
      if (nodeId) {
        this.pendingNodeIds.delete(nodeId);
      }
      this.stopPollingIfIdle();
      await this.refresh();
    }
  }

  private startPolling(): void {
    if (this.pollTimer === null) {
      this.pollTimer = setInterval(() => void this.refresh(), POLL_INTERVAL_MS);
    }
  }

  private stopPollingIfIdle(): void {
    if (this.pendingNodeIds.size === 0 && this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  private toast(message: string): void {
    const note = document.createElement("div");
    note.className = "toast";
    note.textContent = message;
    this.root.appendChild(note);
    setTimeout(() => note.remove(), 6000);
  }

  render(): void {
    const project = this.project;
    if (!project) {
      return;
    }
    const canvas = renderCanvas(project, this.view, {
      degraded: this.degraded,
      pendingNodeIds: this.pendingNodeIds,
      handlers: {
        onTitleEdit: (id, title) =>
          void this.act(null, () => this.client.updateNode(project.id, id, { title })),
        onContentEdit: (id, content) =>
          void this.act(null, () => this.client.updateNode(project.id, id, { content })),
        onFacetChange: (id, facet) =>
          void this.act(null, () => this.client.updateNode(project.id, id, { facet })),
        onDeleteNode: (id) =>
          void this.act(null, () => this.client.deleteNode(project.id, id)),
        onToggleSelect: (id) => {
          this.view.toggleSelect(id);
          this.render();
        },
        onGetSuggestions: (id) =>
          void this.act(id, () => this.client.nodeSuggestions(id)),
        onAdoptSuggestion: (id, action, suggestion) =>
          void this.act(id, () => this.client.generateNodes(id, action, suggestion)),
        onGenerate: (id, action, userPrompt) =>
          void this.act(id, () => this.client.generateNodes(id, action, userPrompt || undefined)),
        onNodeLitAnalysis: (id) =>
          void this.act(id, () => this.client.nodeLitAnalysis(id)),
        onAssessEdge: (edgeId) =>
          void this.act(null, () => this.client.assessEdge(edgeId)),
        onLinkSelected: (sourceId) =>
          void this.act(null, async () => {
            for (const target of this.view.selection) {
              if (target !== sourceId) {
                await this.client.createEdge(project.id, sourceId, target);
              }
            }
          }),
        onOpenPaper: (corpusId) => this.focusPaper(corpusId),
        onCanvasDoubleClick: (x, y) =>
          void this.act(null, () => this.client.createNode(project.id, {
            position: { x: x - NODE_WIDTH / 2, y },
          })),
        onDropSuggestion: (suggestion, x, y) => this.dropChain(suggestion, x, y),
      },
    });

    const literature = renderLiteraturePanel(project, this.searchResults,
      this.analysisItems, {
        onSearch: (query) =>
          void this.act(null, async () => {
            this.searchResults = (await this.client.searchPapers(project.id, query)).data;
          }),
        onRecommend: () =>
          void this.act(null, async () => {
            this.searchResults = (await this.client.recommendPapers(project.id)).data;
          }),
        onIngest: (paper) =>
          void this.act(null, () => this.client.ingestPaper(project.id, paper)),
        onRemovePaper: (corpusId) =>
          void this.act(null, () => this.client.removePaper(project.id, corpusId)),
        onLitSummary: () =>
          void this.act(null, () => this.client.litSummary(project.id)),
        onLitAnalysis: () =>
          void this.act(null, async () => {
            this.analysisItems = (await this.client.litAnalysis(project.id)).data.items;
          }),
        onAsk: (prompt) =>
          void this.act(null, () => this.client.qa(project.id, prompt)),
        onOpenPaper: (corpusId) => this.focusPaper(corpusId),
      });

    const briefs = renderBriefPanel(project, this.view, {
      onGenerateBrief: () =>
        void this.act(null, async () => {
          const selection = [...this.view.selection];
          const { data } = await this.client.generateBrief(project.id, selection);
          this.view.focusBrief(data.id);
        }),
      onFocusBrief: (briefId) => {
        this.view.focusBrief(briefId);
        this.render();
      },
      onDeleteBrief: (briefId) =>
        void this.act(null, async () => {
          await this.client.deleteBrief(project.id, briefId);
          if (this.view.activeBriefTab === briefId) {
            this.view.focusBrief(null);
          }
        }),
      onOpenPaper: (corpusId) => this.focusPaper(corpusId),
    });

    const shell = document.createElement("div");
    shell.className = "app-shell";
    shell.append(literature, canvas, briefs);
    this.root.replaceChildren(shell);
  }

  private focusPaper(corpusId: string): void {
    const card = this.root.querySelector<HTMLElement>(`#paper-${CSS.escape(corpusId)}`);
    if (card) {
      card.scrollIntoView({ behavior: "smooth", block: "center" });
      card.classList.add("focused");
      setTimeout(() => card.classList.remove("focused"), 1500);
    }
  }

  private dropChain(suggestion: string, x: number, y: number): void {
    const project = this.project;
    if (!project) {
      return;
    }
    void this.act(null, () =>
      dragSuggestionToCanvas(this.client, project.id, suggestion, { x, y },
        nodeRects(project.nodes), {
          onPartial: (result) => this.toast(
            `Chain stopped at ${result.failedFacet ?? "?"}: ${result.errorCode ?? "error"}; ` +
            `${result.nodes.length} node(s) kept.`),
        }));
  }
}

export function bootstrap(): void {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app mount point");
  }
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ??
    (window as unknown as { IDEAFORGE_API_URL?: string }).IDEAFORGE_API_URL ??
    "http://127.0.0.1:8080";
  const app = new App(root, new ApiClient(base));
  void app.start();
}
