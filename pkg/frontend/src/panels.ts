// Side panels: literature review (search, collection, summary, analysis,
// Q&A chat) and the research-brief tab panel.

import { paperIndex, renderWithCitations } from "./citations.js";
import type {
  AnalysisSectionDoc,
  BriefDoc,
  PaperDoc,
  ProjectDocument,
} from "./types.js";
import type { ViewState } from "./view.js";

export interface PanelHandlers {
  onSearch?(query: string): void;
  onRecommend?(): void;
  onIngest?(paper: PaperDoc): void;
  onRemovePaper?(corpusId: string): void;
  onLitSummary?(): void;
  onLitAnalysis?(): void;
  onAsk?(prompt: string): void;
  onGenerateBrief?(): void;
  onFocusBrief?(briefId: string | null): void;
  onDeleteBrief?(briefId: string): void;
  onOpenPaper?(corpusId: string): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function renderLiteraturePanel(
  project: ProjectDocument,
  searchResults: PaperDoc[],
  analysisItems: AnalysisSectionDoc[],
  handlers: PanelHandlers = {},
): HTMLElement {
  const papers = paperIndex(project.papers);
  const panel = el("section", "literature-panel");
  panel.appendChild(el("h2", undefined, "Literature Review"));

  // search and add
  const searchForm = el("form", "paper-search");
  const searchInput = el("input", "search-input") as HTMLInputElement;
  searchInput.placeholder = "Search papers...";
  const searchButton = el("button", "search-button", "Search");
  searchForm.append(searchInput, searchButton);
  searchForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (searchInput.value.trim()) {
      handlers.onSearch?.(searchInput.value.trim());
    }
  });
  panel.appendChild(searchForm);

  const results = el("div", "search-results");
  for (const paper of searchResults) {
    const row = el("div", "search-result");
    row.appendChild(el("span", "result-title", paper.title));
    const add = el("button", "result-add", "Add");
    add.addEventListener("click", () => handlers.onIngest?.(paper));
    row.appendChild(add);
    results.appendChild(row);
  }
  panel.appendChild(results);

  const recommend = el("button", "recommend-button", "Recommend Papers");
  recommend.disabled = project.papers.length === 0;
  recommend.addEventListener("click", () => handlers.onRecommend?.());
  panel.appendChild(recommend);

  // collection tray
  const tray = el("div", "collection-tray");
  for (const paper of project.papers) {
    const card = el("article", "paper-card");
    card.id = `paper-${paper.corpusId}`;
    card.dataset.corpusId = paper.corpusId;
    card.appendChild(el("h3", "paper-title", paper.title));
    const authors = paper.authors.join(", ") || "unknown authors";
    card.appendChild(el("div", "paper-meta",
      `${authors} (${paper.year ?? "n.d."}) · ${paper.ingestState}`));
    if (paper.tldr) {
      card.appendChild(el("p", "paper-tldr", paper.tldr));
    }
    const remove = el("button", "paper-remove", "Remove");
    remove.addEventListener("click", () => handlers.onRemovePaper?.(paper.corpusId));
    card.appendChild(remove);
    tray.appendChild(card);
  }
  panel.appendChild(tray);

  // summary
  const summarySection = el("div", "summary-section");
  const summaryButton = el("button", "summary-button", "Generate Literature Summary");
  summaryButton.disabled = project.papers.length === 0;
  summaryButton.addEventListener("click", () => handlers.onLitSummary?.());
  summarySection.appendChild(summaryButton);
  if (project.litSummaryCache) {
    const body = el("p", "summary-text");
    body.replaceChildren(renderWithCitations(project.litSummaryCache.summary, papers,
      { onOpenPaper: handlers.onOpenPaper }));
    summarySection.appendChild(body);
  }
  panel.appendChild(summarySection);

  // canvas-level analysis
  const analysisSection = el("div", "analysis-panel");
  const analysisButton = el("button", "analysis-button", "Generate Literature Analysis");
  analysisButton.disabled = project.papers.length === 0;
  analysisButton.addEventListener("click", () => handlers.onLitAnalysis?.());
  analysisSection.appendChild(analysisButton);
  for (const item of analysisItems) {
    const card = el("div", "analysis-item");
    card.appendChild(el("div", "analysis-title", item.sectionTitle));
    const paperLine = el("div", "analysis-paper");
    paperLine.replaceChildren(renderWithCitations(item.paperTitle, papers,
      { onOpenPaper: handlers.onOpenPaper }));
    card.appendChild(paperLine);
    card.appendChild(el("p", "analysis-key", item.keySection));
    card.appendChild(el("p", "analysis-connection", item.connectionToIdeas));
    for (const step of item.nextSteps ?? []) {
      const block = el("div", "next-step", step);
      block.draggable = true;
      block.title = "Drag onto the canvas to expand into a chain of nodes";
      block.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData("text/plain", step);
      });
      card.appendChild(block);
    }
    analysisSection.appendChild(card);
  }
  panel.appendChild(analysisSection);

  // Q&A chat
  const chat = el("div", "qa-chat");
  chat.appendChild(el("h3", undefined, "Q&A with AI"));
  const history = el("div", "chat-history");
  for (const turn of project.chatHistory) {
    const bubble = el("div", `chat-turn ${turn.role}`);
    bubble.replaceChildren(renderWithCitations(turn.text, papers,
      { onOpenPaper: handlers.onOpenPaper }));
    history.appendChild(bubble);
  }
  chat.appendChild(history);
  const askForm = el("form", "qa-form");
  const askInput = el("input", "qa-input") as HTMLInputElement;
  askInput.placeholder = "Ask about the collected papers or your ideas...";
  const askButton = el("button", "qa-send", "Ask");
  askForm.append(askInput, askButton);
  askForm.addEventListener("submit", (event) => {
    event.preventDefault();
    if (askInput.value.trim()) {
      handlers.onAsk?.(askInput.value.trim());
      askInput.value = "";
    }
  });
  chat.appendChild(askForm);
  panel.appendChild(chat);
  return panel;
}

export function renderBriefPanel(
  project: ProjectDocument,
  view: ViewState,
  handlers: PanelHandlers = {},
): HTMLElement {
  const papers = paperIndex(project.papers);
  const panel = el("section", "brief-panel");
  panel.appendChild(el("h2", undefined, "Research Briefs"));

  const generate = el("button", "brief-generate",
    `Generate Research Brief (${view.selection.size} selected)`);
  generate.disabled = view.selection.size === 0;
  generate.addEventListener("click", () => handlers.onGenerateBrief?.());
  panel.appendChild(generate);

  const tabs = el("div", "brief-tabs");
  for (const brief of project.briefs) {
    const tab = el("button",
      brief.id === view.activeBriefTab ? "brief-tab active" : "brief-tab",
      brief.title || "(untitled brief)");
    tab.dataset.briefId = brief.id;
    tab.addEventListener("click", () =>
      handlers.onFocusBrief?.(brief.id === view.activeBriefTab ? null : brief.id));
    tabs.appendChild(tab);
  }
  panel.appendChild(tabs);

  const brief = project.briefs.find((b) => b.id === view.activeBriefTab);
  if (brief) {
    panel.appendChild(renderBriefBody(brief, papers, handlers));
  }
  return panel;
}

function renderBriefBody(
  brief: BriefDoc,
  papers: Map<string, PaperDoc>,
  handlers: PanelHandlers,
): HTMLElement {
  const body = el("article", "brief-body");
  body.appendChild(el("h3", "brief-title", brief.title));
  const sections: Array<[string, string]> = [
    ["Problem Description and Research Question", brief.problemDescription],
    ["Proposed Design and Solution", brief.proposedDesign],
    ["Evaluation Method", brief.evaluationMethod],
    ["Contribution and Impact", brief.contributionImpact],
  ];
  for (const [heading, text] of sections) {
    body.appendChild(el("h4", "brief-heading", heading));
    body.appendChild(el("p", "brief-section", text));
  }
  const refs = el("ol", "brief-references");
  for (const ref of brief.literatureReferences) {
    const item = el("li", ref.dangling ? "brief-reference dangling" : "brief-reference");
    item.value = ref.citationId;
    if (ref.corpusId && papers.has(ref.corpusId)) {
      const chip = renderWithCitations(`@ref[${ref.corpusId}]`, papers,
        { onOpenPaper: handlers.onOpenPaper });
      item.appendChild(chip);
    } else {
      item.textContent = ref.paperTitle || "(unresolved reference)";
    }
    refs.appendChild(item);
  }
  body.appendChild(refs);
  const remove = el("button", "brief-delete", "Delete brief");
  remove.addEventListener("click", () => handlers.onDeleteBrief?.(brief.id));
  body.appendChild(remove);
  return body;
}
