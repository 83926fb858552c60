/** Leaderboard rendering: weights, per-metric means, and composite ranking.
 *
 * Pure functions from API responses to HTML strings, so the contract tests
 * can assert on exact output without a DOM. Every displayed number comes
 * straight from the report payload.
 */

import { ApiClient, ApiError, Report } from "./api.js";

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderWeights(weights: Record<string, number>): string {
  const rows = Object.entries(weights).map(([metric, w]) => {
    const width = Math.round(w * 100);
    return (
      `<div class="weight-row"><span class="metric">${esc(metric)}</span>` +
      `<span class="bar" style="width:${width}%"></span>` +
      `<span class="value">${w.toFixed(4)}</span></div>`
    );
  });
  return `<div class="weights">${rows.join("")}</div>`;
}

export function renderMeans(
  means: Record<string, Record<string, number>>,
  subjects: string[],
): string {
  const header = subjects.map((s) => `<th>${esc(s)}</th>`).join("");
  const body = Object.entries(means)
    .map(([metric, row]) => {
      const cells = subjects
        .map((s) => `<td>${row[s].toFixed(1)}</td>`)
        .join("");
      return `<tr><th>${esc(metric)}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="means"><thead><tr><th></th>${header}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderRanking(ranking: Report["ranking"]): string {
  const rows = ranking
    .map(
      (r) =>
        `<tr class="rank-${r.rank}"><td>${r.rank}</td>` +
        `<td>${esc(r.subject)}</td><td>${r.score.toFixed(2)}</td></tr>`,
    )
    .join("");
  return (
    `<table class="ranking"><thead><tr><th>#</th><th>subject</th>` +
    `<th>score</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderGaps(gaps: { metric: string; subject: string }[]): string {
  const items = gaps
    .map((g) => `<li>${esc(g.metric)} / ${esc(g.subject)}</li>`)
    .join("");
  return (
    `<div class="gaps"><p>report unavailable, missing ratings:</p>` +
    `<ul>${items}</ul></div>`
  );
}

export function renderError(code: string, message: string): string {
  return `<div class="error">${esc(code)}: ${esc(message)}</div>`;
}

export async function leaderboardView(
  api: ApiClient,
  sessionId: string,
  subjects: string[],
): Promise<string> {
  try {
    const report = await api.getReport(sessionId);
    return (
      renderWeights(report.weights) +
      renderMeans(report.means, subjects) +
      renderRanking(report.ranking)
    );
  } catch (err) {
    if (err instanceof ApiError) {
      const gaps = err.body.details["gaps"];
      if (err.body.code === "MissingRatings" && Array.isArray(gaps)) {
        return renderGaps(gaps as { metric: string; subject: string }[]);
      }
      return renderError(err.body.code, err.body.message);
    }
    throw err;
  }
}
