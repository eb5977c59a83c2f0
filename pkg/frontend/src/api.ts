// Thin fetch client for the game service.  Every verdict the UI shows comes
// from one of these calls; nothing is computed locally.

import type {
  CompileResponse,
  ProblemDoc,
  QuantifierName,
  SessionDoc,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let code = `HTTP ${response.status}`;
      let detail = response.statusText;
      try {
        const doc = (await response.json()) as { error?: string; detail?: string };
        if (doc.error) code = doc.error;
        if (doc.detail) detail = doc.detail;
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiRequestError(response.status, code, detail);
    }
    return (await response.json()) as T;
  }

  postProblem(doc: ProblemDoc): Promise<{ id: string }> {
    return this.request("POST", "/problems", doc);
  }

  getProblem(id: string): Promise<ProblemDoc> {
    return this.request("GET", `/problems/${id}`);
  }

  compile(problemId: string): Promise<CompileResponse> {
    return this.request("POST", `/problems/${problemId}/compile`, {});
  }

  createGame(baseId: string, humanRole: QuantifierName): Promise<SessionDoc> {
    return this.request("POST", "/games", { base_id: baseId, human_role: humanRole });
  }

  getGame(id: string): Promise<SessionDoc> {
    return this.request("GET", `/games/${id}`);
  }

  move(id: string, value: number): Promise<SessionDoc> {
    return this.request("POST", `/games/${id}/move`, { value });
  }

  winningMoves(id: string): Promise<{ values: number[] }> {
    return this.request("GET", `/games/${id}/winning-moves`);
  }

  whatIf(id: string, value: number): Promise<{ winning: boolean }> {
    return this.request("POST", `/games/${id}/whatif`, { value });
  }
}
