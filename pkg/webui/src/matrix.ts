/** Matrix editor state: a client mirror of the server judgment grid.
 *
 * Editing cell (i, j) optimistically shows 1/v at (j, i), matching the
 * server's strict reciprocity mode; the consistency badge always reflects
 * the most recent server response, never a local computation.
 */

import { ApiClient, ApiError, LiveConsistency } from "./api.js";

export type BadgeState =
  | { kind: "incomplete"; cellsRemaining: number }
  | { kind: "pass"; cr: number }
  | { kind: "fail"; cr: number };

export interface CellError {
  i: number;
  j: number;
  code: string;
  message: string;
}

export class MatrixEditor {
  readonly n: number;
  grid: (number | null)[][];
  badge: BadgeState;
  dirty = new Set<string>();
  lastError: CellError | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
    readonly metrics: string[],
    grid?: (number | null)[][],
  ) {
    this.n = metrics.length;
    this.grid =
      grid ??
      Array.from({ length: this.n }, (_, i) =>
        Array.from({ length: this.n }, (_, j) => (i === j ? 1 : null)),
      );
    this.badge = {
      kind: "incomplete",
      cellsRemaining: this.cellsRemaining(),
    };
  }

  cellsRemaining(): number {
    let remaining = 0;
    for (let i = 0; i < this.n; i++) {
      for (let j = i + 1; j < this.n; j++) {
        if (this.grid[i][j] === null) remaining++;
      }
    }
    return remaining;
  }

  /** Commit one cell: optimistic mirror, server round-trip, badge update.
   * On a server rejection both cells revert and the error is kept for
   * inline display. */
  async setCell(i: number, j: number, value: number): Promise<void> {
    if (i === j) throw new Error("diagonal cells are fixed at 1");
    const prev = this.grid[i][j];
    const prevMirror = this.grid[j][i];
    this.grid[i][j] = value;
    this.grid[j][i] = value > 0 ? 1 / value : null;
    this.lastError = null;
    try {
      const live = await this.api.putJudgment(this.sessionId, i, j, value);
      this.applyConsistency(live);
      this.dirty.add(`${i},${j}`).add(`${j},${i}`);
    } catch (err) {
      this.grid[i][j] = prev;
      this.grid[j][i] = prevMirror;
      if (err instanceof ApiError) {
        this.lastError = { i, j, code: err.body.code, message: err.body.message };
        return;
      }
      throw err;
    }
  }

  applyConsistency(live: LiveConsistency): void {
    if (!live.complete || live.report === null) {
      this.badge = { kind: "incomplete", cellsRemaining: live.cells_remaining };
    } else if (live.report.cr < live.report.threshold) {
      this.badge = { kind: "pass", cr: live.report.cr };
    } else {
      this.badge = { kind: "fail", cr: live.report.cr };
    }
  }

  badgeText(): string {
    switch (this.badge.kind) {
      case "incomplete":
        return `incomplete, ${this.badge.cellsRemaining} cells remaining`;
      case "pass":
        return `CR ${this.badge.cr.toFixed(4)} — consistent`;
      case "fail":
        return `CR ${this.badge.cr.toFixed(4)} — revise your judgments`;
    }
  }

  badgeColor(): "gray" | "green" | "red" {
    if (this.badge.kind === "incomplete") return "gray";
    return this.badge.kind === "pass" ? "green" : "red";
  }
}
