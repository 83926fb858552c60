/** Single-page wiring: three tabs (Judgments, Ratings, Results) over one
 * session. The session id lives in the URL hash; everything else is
 * reconstructed from server state on load. */

import { ApiClient } from "./api.js";
import { leaderboardView } from "./leaderboard.js";
import { MatrixEditor } from "./matrix.js";
import { RatingForm } from "./ratings.js";

const DEFAULT_METRICS = [
  "Helpfulness",
  "Relevance",
  "Accuracy",
  "Level of Details",
  "Academic Standard",
  "Experimental Details",
];
const DEFAULT_SUBJECTS = [
  "HouYi",
  "Claude",
  "ChatGPT",
  "ERNIE Bot",
  "SparkDesk",
  "LLaMA-13B",
];

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

async function loadSession(api: ApiClient): Promise<{
  editor: MatrixEditor;
  form: RatingForm;
  subjects: string[];
}> {
  let sessionId = window.location.hash.slice(1);
  if (!sessionId) {
    const created = await api.createSession(DEFAULT_METRICS, DEFAULT_SUBJECTS);
    sessionId = created.id;
    window.location.hash = sessionId;
  }
  const state = await api.getSession(sessionId);
  const editor = new MatrixEditor(api, state.id, state.metrics, state.judgment);
  const form = new RatingForm(api, state.id, "expert", state.subjects, state.metrics);
  return { editor, form, subjects: state.subjects };
}

function renderMatrix(editor: MatrixEditor): void {
  const table = el("matrix");
  table.innerHTML = "";
  for (let i = 0; i < editor.n; i++) {
    const row = document.createElement("tr");
    for (let j = 0; j < editor.n; j++) {
      const cell = document.createElement("td");
      if (i === j) {
        cell.textContent = "1";
      } else {
        const input = document.createElement("input");
        const v = editor.grid[i][j];
        input.value = v === null ? "" : v.toPrecision(4);
        input.addEventListener("change", async () => {
          await editor.setCell(i, j, Number(input.value));
          renderMatrix(editor);
          renderBadge(editor);
        });
        cell.appendChild(input);
      }
      row.appendChild(cell);
    }
    table.appendChild(row);
  }
}

function renderBadge(editor: MatrixEditor): void {
  const badge = el("badge");
  badge.textContent = editor.badgeText();
  badge.className = `badge ${editor.badgeColor()}`;
  const error = el("matrix-error");
  error.textContent = editor.lastError
    ? `${editor.lastError.code}: ${editor.lastError.message}`
    : "";
}

function renderRatings(form: RatingForm): void {
  const table = el("ratings");
  table.innerHTML = "";
  for (const subject of form.subjects) {
    const row = document.createElement("tr");
    const label = document.createElement("th");
    label.textContent = subject;
    row.appendChild(label);
    for (const metric of form.metrics) {
      const cell = document.createElement("td");
      const input = document.createElement("input");
      input.type = "number";
      input.min = "0";
      input.max = "100";
      input.addEventListener("change", async () => {
        await form.submit(subject, metric, Number(input.value));
        el("meter").textContent = form.completionMeter();
        const status = form.cell(subject, metric);
        cell.className = status.status;
        cell.title = status.error ?? "";
      });
      cell.appendChild(input);
      row.appendChild(cell);
    }
    table.appendChild(row);
  }
  el("meter").textContent = form.completionMeter();
}

async function main(): Promise<void> {
  const api = new ApiClient("");
  const { editor, form, subjects } = await loadSession(api);
  renderMatrix(editor);
  renderBadge(editor);
  renderRatings(form);
  el("refresh").addEventListener("click", async () => {
    el("leaderboard").innerHTML = await leaderboardView(api, editor.sessionId, subjects);
  });
  for (const tab of ["judgments", "ratings-tab", "results"]) {
    el(`show-${tab}`).addEventListener("click", () => {
      for (const other of ["judgments", "ratings-tab", "results"]) {
        el(other).style.display = other === tab ? "block" : "none";
      }
    });
  }
}

main().catch((err) => {
  el("matrix-error").textContent = String(err);
});
