/** Typed client for the kgforge HTTP API (/api/v1). */

export type PropertyValue = string | string[];

export interface NodeResponse {
  node_uri: string;
  node_id: string;
  node_labels: string[];
  node_properties: Record<string, PropertyValue>;
}

export interface RelationshipEntry extends NodeResponse {
  relationship_type: string;
  relationship_properties: Record<string, string[]>;
}

export interface RelationshipsResponse {
  relationships: RelationshipEntry[];
}

export interface RelMetadataResponse {
  relationship_type: string;
  properties: string[];
  total_count: number;
}

export interface SchemaResponse {
  node_count: number;
  edge_count: number;
  labels: Record<string, number>;
  predicates: Record<string, number>;
}

export interface SearchResponse {
  results: NodeResponse[];
  total: number;
}

export interface QueryResponse {
  results: Record<string, unknown>[];
}

export interface ViewRequest {
  labels: string[];
  predicates: string[];
  property_filter?: string;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Splits a CURIE into the scheme/local pair the node endpoints expect. */
export function splitCurie(curie: string): { scheme: string; local: string } {
  const at = curie.indexOf(":");
  if (at <= 0) {
    throw new Error(`not a CURIE: ${curie}`);
  }
  return { scheme: curie.slice(0, at), local: curie.slice(at + 1) };
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) =>
      fetch(input, init),
  ) {}

  private async getJson<T>(path: string, params: Record<string, string>): Promise<T> {
    const search = new URLSearchParams(params).toString();
    const url = `${this.baseUrl}${path}${search ? `?${search}` : ""}`;
    const response = await this.fetchImpl(url);
    if (!response.ok) {
      const body = await response.text();
      throw new ApiError(response.status, body || response.statusText);
    }
    return (await response.json()) as T;
  }

  search(q: string, limit = 25, offset = 0): Promise<SearchResponse> {
    return this.getJson("/api/v1/search", {
      q,
      limit: String(limit),
      offset: String(offset),
    });
  }

  node(curie: string): Promise<NodeResponse> {
    const { scheme, local } = splitCurie(curie);
    return this.getJson("/api/v1/node/id", {
      node_id: local,
      node_id_scheme: scheme,
    });
  }

  relationships(
    curie: string,
    direction: "in" | "out" | "both" = "both",
    limit = 100,
    offset = 0,
  ): Promise<RelationshipsResponse> {
    const { scheme, local } = splitCurie(curie);
    return this.getJson("/api/v1/relationships/id", {
      node_id: local,
      node_id_scheme: scheme,
      direction,
      limit: String(limit),
      offset: String(offset),
    });
  }

  relMetadata(relType: string): Promise<RelMetadataResponse> {
    return this.getJson("/api/v1/rel_metadata", { rel_type: relType });
  }

  schema(): Promise<SchemaResponse> {
    return this.getJson("/api/v1/schema", {});
  }

  async query(text: string): Promise<QueryResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ query: text }),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as QueryResponse;
  }

  /** Downloads a view as the raw zip bytes the server produced. */
  async downloadView(spec: ViewRequest): Promise<Uint8Array> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/v1/views`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(spec),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return new Uint8Array(await response.arrayBuffer());
  }
}
