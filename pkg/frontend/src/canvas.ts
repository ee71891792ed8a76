// Node-link canvas scene. renderCanvas is a pure projection of
// (project document, view state): identical inputs produce an identical DOM
// tree, so the scene survives reloads and revision-based refreshes.

import { edgeColor, facetColor } from "./colors.js";
import { paperIndex, renderWithCitations } from "./citations.js";
import type {
  BriefDoc,
  EdgeDoc,
  FacetType,
  NodeDoc,
  ProjectDocument,
} from "./types.js";
import { FACET_ORDER } from "./types.js";
import type { ViewState } from "./view.js";

export const NODE_WIDTH = 240;
export const NODE_HEIGHT = 140;
export const CHIP_HEIGHT = 32;

export interface CanvasHandlers {
  onTitleEdit?(nodeId: string, title: string): void;
  onContentEdit?(nodeId: string, content: string): void;
  onFacetChange?(nodeId: string, facet: FacetType): void;
  onToggleSelect?(nodeId: string): void;
  onDeleteNode?(nodeId: string): void;
  onGetSuggestions?(nodeId: string): void;
  onAdoptSuggestion?(nodeId: string, action: string, suggestion: string): void;
  onGenerate?(nodeId: string, action: string, userPrompt: string): void;
  onNodeLitAnalysis?(nodeId: string): void;
  onAssessEdge?(edgeId: string): void;
  onLinkSelected?(sourceId: string): void;
  onOpenPaper?(corpusId: string): void;
  onCanvasDoubleClick?(x: number, y: number): void;
  onDropSuggestion?(suggestion: string, x: number, y: number): void;
}

export interface RenderOptions {
  handlers?: CanvasHandlers;
  degraded?: boolean;
  pendingNodeIds?: Set<string>;
}

export function activeBrief(project: ProjectDocument, view: ViewState): BriefDoc | null {
  if (!view.activeBriefTab) {
    return null;
  }
  return project.briefs.find((b) => b.id === view.activeBriefTab) ?? null;
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

export function renderCanvas(
  project: ProjectDocument | null,
  view: ViewState,
  options: RenderOptions = {},
): HTMLElement {
  const handlers = options.handlers ?? {};
  const root = el("div", "canvas-root");

  if (options.degraded) {
    const banner = el("div", "degraded-banner",
      "Canvas is showing the last loaded state; the server could not be reached.");
    root.appendChild(banner);
  }
  if (!project) {
    root.appendChild(el("div", "canvas-viewport empty"));
    return root;
  }

  const brief = activeBrief(project, view);
  const highlightNodes = new Set(brief?.sourceNodeIds ?? []);
  const highlightEdges = new Set(brief?.sourceEdgeIds ?? []);
  const nodeById = new Map(project.nodes.map((n) => [n.id, n]));
  const papers = paperIndex(project.papers);

  const viewport = el("div", "canvas-viewport");
  const surface = el("div", "canvas-surface");
  surface.style.transform =
    `translate(${view.pan.x}px, ${view.pan.y}px) scale(${view.zoom})`;
  viewport.appendChild(surface);
  viewport.addEventListener("dblclick", (event) => {
    if (event.target === viewport || event.target === surface) {
      handlers.onCanvasDoubleClick?.(event.offsetX, event.offsetY);
    }
  });
  viewport.addEventListener("dragover", (event) => event.preventDefault());
  viewport.addEventListener("drop", (event) => {
    const suggestion = event.dataTransfer?.getData("text/plain");
    if (suggestion) {
      event.preventDefault();
      handlers.onDropSuggestion?.(suggestion, event.offsetX, event.offsetY);
    }
  });

  surface.appendChild(renderEdgeLayer(project, nodeById, highlightEdges, brief, handlers));

  const nodeLayer = el("div", "node-layer");
  for (const node of project.nodes) {
    nodeLayer.appendChild(renderNodeWidget(node, view, {
      highlighted: highlightNodes.has(node.id),
      dimmed: brief !== null && !highlightNodes.has(node.id),
      selected: view.selection.has(node.id),
      pending: options.pendingNodeIds?.has(node.id) ?? false,
      handlers,
      papers,
    }));
  }
  surface.appendChild(nodeLayer);
  root.appendChild(viewport);

  if (project.nodes.length === 0) {
    root.appendChild(el("div", "empty-hint",
      "Double-click the canvas to create your first idea facet node."));
  }

  if (brief) {
    const missing = brief.sourceNodeIds.filter((id) => !nodeById.has(id));
    if (missing.length > 0) {
      const strip = el("div", "ghost-strip");
      strip.appendChild(el("span", "ghost-label",
        `${missing.length} source node(s) of this brief were deleted:`));
      for (const id of missing) {
        const marker = el("span", "ghost-marker", id.slice(0, 8));
        marker.dataset.nodeId = id;
        strip.appendChild(marker);
      }
      root.appendChild(strip);
    }
  }
  return root;
}

function renderEdgeLayer(
  project: ProjectDocument,
  nodeById: Map<string, NodeDoc>,
  highlightEdges: Set<string>,
  brief: BriefDoc | null,
  handlers: CanvasHandlers,
): SVGSVGElement {
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("class", "edge-layer");
  for (const edge of project.edges) {
    const source = nodeById.get(edge.source);
    const target = nodeById.get(edge.target);
    if (!source || !target) {
      continue;
    }
    const group = document.createElementNS(svg.namespaceURI, "g") as SVGGElement;
    let cls = "edge";
    if (highlightEdges.has(edge.id)) {
      cls += " highlighted";
    } else if (brief) {
      cls += " dimmed";
    }
    group.setAttribute("class", cls);
    group.dataset.edgeId = edge.id;

    const line = document.createElementNS(svg.namespaceURI, "line") as SVGLineElement;
    const x1 = source.position.x + NODE_WIDTH / 2;
    const y1 = source.position.y + NODE_HEIGHT / 2;
    const x2 = target.position.x + NODE_WIDTH / 2;
    const y2 = target.position.y + NODE_HEIGHT / 2;
    line.setAttribute("x1", String(x1));
    line.setAttribute("y1", String(y1));
    line.setAttribute("x2", String(x2));
    line.setAttribute("y2", String(y2));
    line.setAttribute("stroke", edgeColor(edge.strength));
    line.setAttribute("marker-end", "url(#arrow)");
    group.appendChild(line);

    // strength shown numerically alongside the color (accessibility)
    const label = document.createElementNS(svg.namespaceURI, "text") as SVGTextElement;
    label.setAttribute("class", "edge-label");
    label.setAttribute("x", String((x1 + x2) / 2));
    label.setAttribute("y", String((y1 + y2) / 2 - 6));
    label.textContent = edge.strength === null ? "" : edge.strength.toFixed(2);
    group.appendChild(label);

    if (edge.suggestion) {
      const tip = document.createElementNS(svg.namespaceURI, "title");
      tip.textContent = edge.suggestion;
      group.appendChild(tip);
    }
    group.addEventListener("click", () => handlers.onAssessEdge?.(edge.id));
    svg.appendChild(group);
  }
  return svg;
}

interface WidgetOptions {
  highlighted: boolean;
  dimmed: boolean;
  selected: boolean;
  pending: boolean;
  handlers: CanvasHandlers;
  papers: Map<string, import("./types.js").PaperDoc>;
}

function renderNodeWidget(node: NodeDoc, view: ViewState, options: WidgetOptions): HTMLElement {
  const { handlers } = options;
  let cls = "node-widget";
  if (view.collapsed) {
    cls += " collapsed";
  }
  if (options.highlighted) {
    cls += " highlighted";
  }
  if (options.dimmed) {
    cls += " dimmed";
  }
  if (options.selected) {
    cls += " selected";
  }
  const widget = el("div", cls);
  widget.dataset.nodeId = node.id;
  widget.dataset.facet = node.facet;
  widget.style.left = `${node.position.x}px`;
  widget.style.top = `${node.position.y}px`;
  widget.style.borderLeftColor = facetColor(node.facet);

  if (view.collapsed) {
    // semantic zoom: title-only chip
    widget.appendChild(el("span", "chip-title", node.title || "(untitled)"));
    return widget;
  }

  const header = el("div", "node-header");
  const facetSelect = el("select", "facet-select");
  for (const facet of FACET_ORDER) {
    const option = el("option", undefined, facet) as HTMLOptionElement;
    option.value = facet;
    option.selected = facet === node.facet;
    facetSelect.appendChild(option);
  }
  facetSelect.addEventListener("change", () =>
    handlers.onFacetChange?.(node.id, facetSelect.value as FacetType));
  header.appendChild(facetSelect);

  const selectBox = el("input", "select-box") as HTMLInputElement;
  selectBox.type = "checkbox";
  selectBox.checked = options.selected;
  selectBox.title = "Include in brief selection";
  selectBox.addEventListener("change", () => handlers.onToggleSelect?.(node.id));
  header.appendChild(selectBox);

  const deleteButton = el("button", "node-delete", "✕");
  deleteButton.addEventListener("click", () => handlers.onDeleteNode?.(node.id));
  header.appendChild(deleteButton);
  widget.appendChild(header);

  const title = el("input", "node-title") as HTMLInputElement;
  title.value = node.title;
  title.placeholder = "Node title (a few words)";
  title.addEventListener("change", () => handlers.onTitleEdit?.(node.id, title.value));
  widget.appendChild(title);

  const content = el("textarea", "node-content") as HTMLTextAreaElement;
  content.value = node.content;
  content.placeholder = "Describe this idea facet...";
  content.addEventListener("change", () => handlers.onContentEdit?.(node.id, content.value));
  widget.appendChild(content);

  widget.appendChild(renderSuggestionArea(node, options));
  // four expandable side menus
  widget.appendChild(renderTopMenu(node, options));
  widget.appendChild(renderBottomMenu(node, options));
  widget.appendChild(renderLeftMenu(node, options));
  widget.appendChild(renderRightMenu(node, options));
  return widget;
}

function renderTopMenu(node: NodeDoc, options: WidgetOptions): HTMLElement {
  const menu = el("details", "side-menu top") as HTMLDetailsElement;
  menu.appendChild(el("summary", undefined, "▴ connect"));
  const link = el("button", "link-selected", "Link this node to the selected nodes");
  link.addEventListener("click", () => options.handlers.onLinkSelected?.(node.id));
  menu.appendChild(link);
  return menu;
}

function renderRightMenu(node: NodeDoc, options: WidgetOptions): HTMLElement {
  const menu = el("details", "side-menu right") as HTMLDetailsElement;
  menu.appendChild(el("summary", undefined, "▸ details"));
  menu.appendChild(el("div", "node-meta",
    `created by ${node.createdBy} · last edit at revision ${node.contentRevision}`));
  const remove = el("button", "node-delete-menu", "Delete node");
  remove.addEventListener("click", () => options.handlers.onDeleteNode?.(node.id));
  menu.appendChild(remove);
  return menu;
}

function renderSuggestionArea(node: NodeDoc, options: WidgetOptions): HTMLElement {
  const { handlers } = options;
  const area = el("div", "suggestion-area");
  const getButton = el("button", "get-suggestions", "Get AI Suggestions");
  getButton.disabled = options.pending;
  getButton.addEventListener("click", () => handlers.onGetSuggestions?.(node.id));
  area.appendChild(getButton);

  const cache = node.suggestionCache;
  if (!cache || cache.items.length === 0) {
    return area;
  }
  if (node.contentRevision > cache.generatedAtRevision) {
    area.appendChild(el("span", "stale-badge", "stale"));
  }
  const viewer = el("div", "suggestion-viewer");
  let index = 0;
  const body = el("div", "suggestion-text");
  const meta = el("div", "suggestion-meta");
  const show = () => {
    const item = cache.items[index];
    body.replaceChildren(renderWithCitations(item.suggestion, options.papers,
      { onOpenPaper: handlers.onOpenPaper }));
    meta.textContent = `${item.action} · ${item.ideaFacet} · ${index + 1}/${cache.items.length}`;
  };
  const prev = el("button", "suggestion-prev", "‹");
  prev.addEventListener("click", () => {
    index = (index - 1 + cache.items.length) % cache.items.length;
    show();
  });
  const next = el("button", "suggestion-next", "›");
  next.addEventListener("click", () => {
    index = (index + 1) % cache.items.length;
    show();
  });
  const adopt = el("button", "suggestion-adopt", "Adopt");
  adopt.disabled = options.pending;
  adopt.addEventListener("click", () => {
    const item = cache.items[index];
    handlers.onAdoptSuggestion?.(node.id, item.action, item.suggestion);
  });
  show();
  viewer.append(prev, body, next, adopt);
  area.appendChild(viewer);
  area.appendChild(meta);
  return area;
}

function renderBottomMenu(node: NodeDoc, options: WidgetOptions): HTMLElement {
  const { handlers } = options;
  const menu = el("details", "side-menu bottom") as HTMLDetailsElement;
  menu.appendChild(el("summary", undefined, "▾ generate"));
  const steer = el("input", "steer-prompt") as HTMLInputElement;
  steer.placeholder = "Optional prompt to steer generation";
  menu.appendChild(steer);
  const row = el("div", "generate-row");
  for (const facet of FACET_ORDER) {
    const button = el("button", "generate-facet", facet);
    button.dataset.facet = facet;
    button.disabled = options.pending;
    button.addEventListener("click", () =>
      options.handlers.onGenerate?.(node.id, facet, steer.value));
    row.appendChild(button);
  }
  const alternatives = el("button", "generate-alternatives", "Generate Alternatives");
  alternatives.disabled = options.pending;
  alternatives.addEventListener("click", () =>
    handlers.onGenerate?.(node.id, "Generate Alternatives", steer.value));
  row.appendChild(alternatives);
  const regenerate = el("button", "generate-regenerate", "Regenerate");
  regenerate.disabled = options.pending;
  regenerate.addEventListener("click", () =>
    handlers.onGenerate?.(node.id, "Regenerate Current Idea Facet", steer.value));
  row.appendChild(regenerate);
  menu.appendChild(row);
  return menu;
}

function renderLeftMenu(node: NodeDoc, options: WidgetOptions): HTMLElement {
  const { handlers } = options;
  const menu = el("details", "side-menu left") as HTMLDetailsElement;
  menu.appendChild(el("summary", undefined, "◂ literature"));
  const refresh = el("button", "node-lit-refresh", "Analyze against collection");
  refresh.disabled = options.pending;
  refresh.addEventListener("click", () => handlers.onNodeLitAnalysis?.(node.id));
  menu.appendChild(refresh);
  const analysis = node.nodeAnalysisCache;
  if (analysis) {
    for (const section of analysis.mostRelevantSections) {
      const card = el("div", "analysis-section");
      card.appendChild(el("div", "analysis-title", section.sectionTitle));
      const paperLine = el("div", "analysis-paper");
      paperLine.replaceChildren(renderWithCitations(section.paperTitle, options.papers,
        { onOpenPaper: handlers.onOpenPaper }));
      card.appendChild(paperLine);
      card.appendChild(el("div", "analysis-key", section.keySection));
      card.appendChild(el("div", "analysis-connection", section.connectionToIdeas));
      menu.appendChild(card);
    }
    for (const suggestion of analysis.suggestions) {
      const step = el("div", "next-step", suggestion);
      step.draggable = true;
      step.title = "Drag onto the canvas to expand into a chain of nodes";
      step.addEventListener("dragstart", (event) => {
        event.dataTransfer?.setData("text/plain", suggestion);
      });
      menu.appendChild(step);
    }
  }
  return menu;
}
