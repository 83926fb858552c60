"""Deterministic judge replay.

Feeds recorded judge transcripts back through the prompt/parse pipeline and
aggregates the per-run scores into a mean row, exactly as a live run would.
"""

from pathlib import Path

from mceval import judge, scoring
from mceval.backends import ReplayBackend

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"

task = judge.JudgeTask.from_file(FIXTURES / "tasks" / "wind_task.json")
backend = ReplayBackend(FIXTURES / "transcripts" / "wind")

runs = judge.run_judging(task, judge.JudgeConfig(runs=backend.run_count), backend)

print("subjects:", ", ".join(label for label, _ in task.answers))
for run in runs:
    scores = " ".join(f"{v:g}" for v in run.parsed.scores)
    print(f"run {run.run_index + 1}: {scores}  (rule {run.parsed.extraction_rule})")

table, failed = judge.aggregate_runs(runs)
means = scoring.metric_means(table)
print("means:", " ".join(f"{v:.1f}" for v in means.means))
if failed:
    print(f"failed runs: {failed}")
