// Client-side view state: pan/zoom, node selection, active brief tab, and
// which side panels are open. The canvas scene is a pure projection of
// (project document, view state).

export const ZOOM_MIN = 0.1;
export const ZOOM_MAX = 3.0;

// Below this factor node widgets collapse to title-only chips.
export const SEMANTIC_ZOOM_THRESHOLD = 0.5;

export interface PanelState {
  literature: boolean;
  briefs: boolean;
}

export class ViewState {
  pan = { x: 0, y: 0 };
  zoom = 1.0;
  selection = new Set<string>();
  activeBriefTab: string | null = null;
  panels: PanelState = { literature: true, briefs: true };

  setZoom(zoom: number): number {
    this.zoom = Math.min(ZOOM_MAX, Math.max(ZOOM_MIN, zoom));
    return this.zoom;
  }

  zoomBy(factor: number): number {
    return this.setZoom(this.zoom * factor);
  }

  panBy(dx: number, dy: number): void {
    this.pan = { x: this.pan.x + dx, y: this.pan.y + dy };
  }

  get collapsed(): boolean {
    return this.zoom < SEMANTIC_ZOOM_THRESHOLD;
  }

  toggleSelect(nodeId: string): void {
    if (this.selection.has(nodeId)) {
      this.selection.delete(nodeId);
    } else {
      this.selection.add(nodeId);
    }
  }

  clearSelection(): void {
    this.selection.clear();
  }

  /** Keep the invariant selection ⊆ live nodes after deletes or reloads. */
  pruneSelection(liveNodeIds: Iterable<string>): void {
    const live = new Set(liveNodeIds);
    for (const id of [...this.selection]) {
      if (!live.has(id)) {
        this.selection.delete(id);
      }
    }
  }

  focusBrief(briefId: string | null): void {
    this.activeBriefTab = briefId;
  }
}
