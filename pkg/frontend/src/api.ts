// Typed client for the budgetvote HTTP API. All money is integer euro
// cents; errors carry the server's {code, message, details} body.

export interface ArgumentText {
  id: string;
  text: string;
}

export interface ProposalCard {
  id: string;
  text: string;
  cost: number;
  ordinal: number;
  pro: ArgumentText[];
  con: ArgumentText[];
  pro_total: number;
  con_total: number;
}

export interface ProposalList {
  seed: number;
  proposals: ProposalCard[];
}

export interface ArgumentLists {
  seed: number;
  pro: ArgumentText[];
  con: ArgumentText[];
  pro_total: number;
  con_total: number;
}

export interface IssueSummary {
  id: string;
  title: string;
  budget: number;
  cost_min: number;
  cost_max: number;
  phase: "proposing" | "review" | "voting" | "closed";
  proposing_allowed: boolean;
  results_visible: boolean;
  proposal_count: number;
}

export interface BallotEcho {
  preferences: string[];
  sequence: number;
}

export interface ResultPayload {
  n_max: number;
  rows: Record<string, { borda: number; approval: number; priority_histogram: number[] }>;
  ranking: string[];
  winners: string[];
  spent: number;
  leftover: number;
  budget: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown = undefined,
  ) {
    super(message);
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let code = "unknown";
  let message = `request failed with ${response.status}`;
  let details: unknown;
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    details = body.details;
  } catch {
    // non-JSON error body; keep the status-based message
  }
  return new ApiError(response.status, code, message, details);
}

export class Client {
  constructor(
    private baseUrl: string,
    private token?: string,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await fetch(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) throw await toApiError(response);
    return (await response.json()) as T;
  }

  getIssue(issueId: string): Promise<IssueSummary> {
    return this.request("GET", `/issues/${issueId}`);
  }

  getProposals(issueId: string, seed?: number): Promise<ProposalList> {
    const query = seed === undefined ? "" : `?seed=${seed}`;
    return this.request("GET", `/issues/${issueId}/proposals${query}`);
  }

  getArguments(proposalId: string, opts: { all?: boolean; seed?: number } = {}): Promise<ArgumentLists> {
    const params = new URLSearchParams();
    if (opts.all) params.set("all", "true");
    if (opts.seed !== undefined) params.set("seed", String(opts.seed));
    const query = params.toString();
    return this.request("GET", `/proposals/${proposalId}/arguments${query ? "?" + query : ""}`);
  }

  /** Full replacement: the array order is exactly the ranking sent. */
  putBallot(issueId: string, preferences: string[]): Promise<BallotEcho> {
    return this.request("PUT", `/issues/${issueId}/ballot`, preferences);
  }

  postProposal(issueId: string, text: string, costCents: number): Promise<{ id: string; ordinal: number }> {
    return this.request("POST", `/issues/${issueId}/proposals`, { text, cost: costCents });
  }

  getResult(issueId: string): Promise<ResultPayload> {
    return this.request("GET", `/issues/${issueId}/result`);
  }
}
