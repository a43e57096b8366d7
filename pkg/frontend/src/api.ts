/** Typed client for the causal-loom HTTP/JSON service. */

export type ArcKind = "directed" | "bidirected" | "undirected";

export interface GraphArc {
  tail: string;
  head: string;
  kind: ArcKind;
}

export interface VariableAttributes {
  manipulativity: string;
  observability: string;
  manipulation_cost: number | null;
  observation_cost: number | null;
}

export interface GraphNode {
  name: string;
  solve_order: number | null;
  attributes: VariableAttributes | null;
}

export interface GraphDocument {
  class: string;
  nodes: GraphNode[];
  arcs: GraphArc[];
  residual: string[];
}

export interface ReleaseCandidate {
  equation: string;
  valid: boolean;
}

export type ActionStatus = "applied" | "needs-release" | "rejected";

export interface ActionResponse {
  status: ActionStatus;
  reason: string | null;
  candidates: ReleaseCandidate[] | null;
  warnings: string[];
  graph: GraphDocument;
}

export interface KbMechanism {
  name: string;
  participants: string[];
  kind: string;
  description: string;
}

export interface KbFolder {
  folders: Record<string, KbFolder>;
  mechanisms: KbMechanism[];
}

export type ActionRequest =
  | { action: "add-mechanism"; path: string }
  | { action: "merge"; source: string; target: string }
  | { action: "set-exogenous"; variable: string; value: number }
  | { action: "release"; equation: string }
  | { action: "cancel" }
  | { action: "extract"; variables: string[]; dest: string };

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

/** Thin wrapper: one method per endpoint, JSON in and out. */
export class Api {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    return this.fetchFn(this.baseUrl + path, init);
  }

  private async expectOk<T>(response: Response): Promise<T> {
    if (!response.ok) {
      const payload = await response.json().catch(() => ({}));
      throw new ApiError(response.status, payload.detail ?? response.statusText);
    }
    return (await response.json()) as T;
  }

  async createSession(model?: string): Promise<{ session: string; graph: GraphDocument }> {
    const body = model === undefined ? {} : { model };
    return this.expectOk(await this.request("POST", "/sessions", body));
  }

  async graph(session: string): Promise<GraphDocument> {
    return this.expectOk(await this.request("GET", `/sessions/${session}/graph`));
  }

  async values(session: string): Promise<{ values: Record<string, number>; structural_only: string[] }> {
    return this.expectOk(await this.request("GET", `/sessions/${session}/values`));
  }

  /**
   * Actions are not raised on HTTP 422: a rejected action still carries the
   * ActionResponse body the dialog needs. 404/409 do raise.
   */
  async action(session: string, body: ActionRequest): Promise<ActionResponse> {
    const response = await this.request("POST", `/sessions/${session}/actions`, body);
    if (response.status === 422) {
      const payload = await response.json();
      if (payload.status === "rejected") {
        return payload as ActionResponse;
      }
      throw new ApiError(422, payload.detail ?? "invalid action");
    }
    return this.expectOk(await Promise.resolve(response));
  }

  async kbTree(): Promise<KbFolder> {
    return this.expectOk(await this.request("GET", "/kb/tree"));
  }

  async kbSearch(variable: string): Promise<string[]> {
    const body = await this.expectOk<{ matches: string[] }>(
      await this.request("GET", `/kb/search?var=${encodeURIComponent(variable)}`),
    );
    return body.matches;
  }
}
