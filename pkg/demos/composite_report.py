"""Weighted composite scoring from expert rating grids.

Loads one rating CSV per criterion, averages each column across raters,
combines the per-criterion means with AHP-derived weights, and prints the
ranked leaderboard.
"""

from pathlib import Path

from mceval import ahp, scoring

ROOT = Path(__file__).resolve().parents[1]
RATINGS = ROOT / "tests" / "fixtures" / "ratings" / "wind"
MATRIX = ROOT / "tests" / "fixtures" / "comparison_matrix.json"

metrics = ["Helpfulness", "Relevance", "Accuracy", "Level of Details",
           "Academic Standard", "Experimental Details"]
stems = ["helpfulness", "relevance", "accuracy", "level_of_details",
         "academic_standard", "experimental_details"]

matrix = ahp.JudgmentMatrix.from_json(MATRIX.read_text())
weights, _ = ahp.derive_weights(matrix)

summaries = []
for metric, stem in zip(metrics, stems):
    table = scoring.read_rating_csv(RATINGS / f"{stem}.csv", metric=metric)
    summaries.append(scoring.metric_means(table))

composites = scoring.composite_scores(summaries, weights)
print(scoring.report_text(summaries, weights, composites), end="")

print("\nleaderboard:")
for row in scoring.rank(composites):
    print(f"  {row.rank}. {row.subject:12s} {row.score:.2f}")
