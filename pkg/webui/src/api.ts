/** Typed client for the evaluation session HTTP API.
 *
 * Every number the UI shows comes back through this module; the client adds
 * no computation of its own.
 */

export interface ApiErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

export interface ConsistencyReport {
  lambda_max: number;
  ci: number;
  ri: number;
  cr: number;
  passed: boolean;
  threshold: number;
}

export interface LiveConsistency {
  complete: boolean;
  cells_remaining: number;
  report: ConsistencyReport | null;
  weights?: Record<string, number>;
}

export interface SessionState {
  id: string;
  metrics: string[];
  subjects: string[];
  judgment: (number | null)[][];
  ratings: RatingEntry[];
}

export interface RatingEntry {
  expert: string;
  subject: string;
  metric: string;
  score: number;
}

export interface Report {
  weights: Record<string, number>;
  consistency: ConsistencyReport;
  means: Record<string, Record<string, number>>;
  composites: { subject: string; score: number }[];
  ranking: { rank: number; subject: string; score: number }[];
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await resp.json();
  if (!resp.ok) {
    throw new ApiError(resp.status, body as ApiErrorBody);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  createSession(metrics: string[], subjects: string[]): Promise<{ id: string; cells_remaining: number }> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      body: JSON.stringify({ metrics, subjects }),
    });
  }

  getSession(id: string): Promise<SessionState> {
    return request(`${this.baseUrl}/sessions/${id}`);
  }

  putJudgment(id: string, i: number, j: number, value: number): Promise<LiveConsistency> {
    return request(`${this.baseUrl}/sessions/${id}/judgments`, {
      method: "PUT",
      body: JSON.stringify({ i, j, value }),
    });
  }

  postRating(id: string, entry: RatingEntry): Promise<{ accepted: number }> {
    return request(`${this.baseUrl}/sessions/${id}/ratings`, {
      method: "POST",
      body: JSON.stringify(entry),
    });
  }

  getWeights(id: string): Promise<LiveConsistency> {
    return request(`${this.baseUrl}/sessions/${id}/weights`);
  }

  getReport(id: string): Promise<Report> {
    return request(`${this.baseUrl}/sessions/${id}/report`);
  }
}
