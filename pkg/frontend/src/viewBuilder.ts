/** View-builder state: label/predicate/filter selection, live preview
 * counts, and CSV download.
 *
 * Invariant: preview counts always correspond to the currently chosen
 * spec. Every preview request carries a sequence number; a response is
 * applied only if it is the newest one issued, so out-of-order responses
 * can never overwrite fresher state.
 */

import { ApiClient, ViewRequest } from "./api";

export interface PreviewCounts {
  nodeCount: number;
  edgeCount: number;
  filteredRows: number | null;
}

export type DownloadStatus = "idle" | "downloading" | "done" | "error";

export class ViewBuilderState {
  readonly labels = new Set<string>();
  readonly predicates = new Set<string>();
  propertyFilter: string | null = null;

  preview: PreviewCounts | null = null;
  downloadStatus: DownloadStatus = "idle";

  private sequence = 0;
  private applied = 0;

  constructor(private readonly api: ApiClient) {}

  get selectionEmpty(): boolean {
    return this.labels.size === 0 && this.predicates.size === 0;
  }

  get downloadEnabled(): boolean {
    return !this.selectionEmpty && this.downloadStatus !== "downloading";
  }

  toRequest(): ViewRequest {
    const request: ViewRequest = {
      labels: [...this.labels].sort(),
      predicates: [...this.predicates].sort(),
    };
    if (this.propertyFilter) {
      request.property_filter = this.propertyFilter;
    }
    return request;
  }

  toggleLabel(label: string): void {
    if (this.labels.has(label)) {
      this.labels.delete(label);
    } else {
      this.labels.add(label);
    }
  }

  togglePredicate(predicate: string): void {
    if (this.predicates.has(predicate)) {
      this.predicates.delete(predicate);
    } else {
      this.predicates.add(predicate);
    }
  }

  /** Fetch preview counts for the current spec. Stale responses (older
   * sequence numbers) are discarded even if they resolve last. */
  async refreshPreview(filterQuery?: string): Promise<PreviewCounts | null> {
    if (this.selectionEmpty) {
      this.preview = null;
      return null;
    }
    const seq = ++this.sequence;
    const labels = [...this.labels];
    const predicates = [...this.predicates];

    const schema = await this.api.schema();
    let filteredRows: number | null = null;
    if (filterQuery) {
      const result = await this.api.query(filterQuery);
      filteredRows = result.results.length;
    }
    if (seq < this.applied || seq < this.sequence) {
      return null; // a newer request already resolved or is in flight
    }
    this.applied = seq;
    const nodeCount =
      labels.length === 0
        ? schema.node_count
        : labels.reduce((sum, label) => sum + (schema.labels[label] ?? 0), 0);
    const edgeCount =
      predicates.length === 0
        ? schema.edge_count
        : predicates.reduce(
            (sum, predicate) => sum + (schema.predicates[predicate] ?? 0),
            0,
          );
    this.preview = { nodeCount, edgeCount, filteredRows };
    return this.preview;
  }

  /** Stream the server's zip bytes through unchanged. */
  async download(): Promise<Uint8Array> {
    if (this.selectionEmpty) {
      throw new Error("empty selection");
    }
    this.downloadStatus = "downloading";
    try {
      const bytes = await this.api.downloadView(this.toRequest());
      this.downloadStatus = "done";
      return bytes;
    } catch (error) {
      this.downloadStatus = "error";
      throw error;
    }
  }
}
