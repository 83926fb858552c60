/** An in-memory stand-in for the session API, faithful to the HTTP
 * contract: same routes, same response shapes, same error envelopes.
 * Consistency figures and report numbers are canned, because the UI must
 * display server numbers rather than compute its own. */

export const WIND_REPORT = {
  weights: {
    Helpfulness: 0.0986,
    Relevance: 0.2568,
    Accuracy: 0.1533,
    "Level of Details": 0.0851,
    "Academic Standard": 0.1703,
    "Experimental Details": 0.2359,
  },
  consistency: {
    lambda_max: 6.5232,
    ci: 0.10464,
    ri: 1.24,
    cr: 0.0844,
    passed: true,
    threshold: 0.1,
  },
  means: {
    Helpfulness: {
      HouYi: 91.8, Claude: 89.2, ChatGPT: 89.0,
      "ERNIE Bot": 90.2, SparkDesk: 88.8, "LLaMA-13B": 60.8,
    },
  },
  composites: [
    { subject: "HouYi", score: 93.45 },
    { subject: "Claude", score: 89.5 },
    { subject: "ChatGPT", score: 89.32 },
    { subject: "ERNIE Bot", score: 90.64 },
    { subject: "SparkDesk", score: 89.23 },
    { subject: "LLaMA-13B", score: 61.41 },
  ],
  ranking: [
    { rank: 1, subject: "HouYi", score: 93.45 },
    { rank: 2, subject: "ERNIE Bot", score: 90.64 },
    { rank: 3, subject: "Claude", score: 89.5 },
    { rank: 4, subject: "ChatGPT", score: 89.32 },
    { rank: 5, subject: "SparkDesk", score: 89.23 },
    { rank: 6, subject: "LLaMA-13B", score: 61.41 },
  ],
};

interface Session {
  id: string;
  metrics: string[];
  subjects: string[];
  judgment: (number | null)[][];
  ratings: { expert: string; subject: string; metric: string; score: number }[];
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function apiError(status: number, code: string, message: string, details: unknown = {}): Response {
  return json(status, { code, message, details });
}

export class MockServer {
  sessions = new Map<string, Session>();
  private nextId = 1;
  /** When set, a complete matrix answers with this consistency report. */
  cannedReport = WIND_REPORT.consistency;
  reportGaps: { metric: string; subject: string }[] | null = null;

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;

    if (method === "POST" && url.endsWith("/sessions")) {
      const id = `s${this.nextId++}`;
      const n = body.metrics.length;
      const judgment = Array.from({ length: n }, (_, i) =>
        Array.from({ length: n }, (_, j) => (i === j ? 1 : null)),
      );
      this.sessions.set(id, {
        id,
        metrics: body.metrics,
        subjects: body.subjects,
        judgment,
        ratings: [],
      });
      return json(201, { id, cells_remaining: (n * (n - 1)) / 2 });
    }

    const match = url.match(/\/sessions\/([^/]+)(\/.*)?$/);
    if (!match) return apiError(404, "NotFound", `no route ${url}`);
    const session = this.sessions.get(match[1]);
    if (!session) return apiError(404, "UnknownSession", `no session ${match[1]}`);
    const tail = match[2] ?? "";

    if (method === "GET" && tail === "") return json(200, session);

    if (method === "PUT" && tail === "/judgments") {
      const { i, j, value } = body;
      if (i === j) return apiError(400, "BadCell", `bad cell (${i}, ${j})`);
      if (value <= 0) {
        return apiError(400, "NonPositiveValue", `judgment value must be positive, got ${value}`);
      }
      session.judgment[i][j] = value;
      session.judgment[j][i] = 1 / value;
      return json(200, this.liveConsistency(session));
    }

    if (method === "POST" && tail === "/ratings") {
      if (body.score < 0 || body.score > 100) {
        return apiError(400, "OutOfRange", `score ${body.score} outside [0, 100]`);
      }
      if (!session.subjects.includes(body.subject)) {
        return apiError(400, "UnknownName", `unknown subject ${body.subject}`);
      }
      const existing = session.ratings.find(
        (r) => r.expert === body.expert && r.subject === body.subject && r.metric === body.metric,
      );
      if (existing) existing.score = body.score;
      else session.ratings.push(body);
      return json(200, { accepted: session.ratings.length });
    }

    if (method === "GET" && tail === "/weights") return json(200, this.liveConsistency(session));

    if (method === "GET" && tail === "/report") {
      if (this.reportGaps) {
        return apiError(409, "MissingRatings", "ratings missing for some cells", {
          gaps: this.reportGaps,
        });
      }
      return json(200, WIND_REPORT);
    }

    return apiError(404, "NotFound", `no route ${method} ${url}`);
  };

  private liveConsistency(session: Session) {
    const n = session.metrics.length;
    let remaining = 0;
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        if (session.judgment[i][j] === null) remaining++;
      }
    }
    if (remaining > 0) {
      return { complete: false, cells_remaining: remaining, report: null };
    }
    return {
      complete: true,
      cells_remaining: 0,
      report: this.cannedReport,
      weights: WIND_REPORT.weights,
    };
  }
}
