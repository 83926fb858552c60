"""Rating-grid aggregation and weighted composite scoring.

A rating table is a raters x subjects grid of 0-100 scores for one metric.
Column means become per-metric summaries; a priority vector turns the
summaries into one weighted composite score per subject.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ahp import PriorityVector

SCORE_MIN = 0.0
SCORE_MAX = 100.0


class ScoringError(Exception):
    pass


class EmptyTableError(ScoringError):
    pass


class MetricMismatchError(ScoringError):
    pass


class SubjectMismatchError(ScoringError):
    pass


@dataclass(frozen=True)
class RatingTable:
    metric: str
    raters: tuple[str, ...]
    subjects: tuple[str, ...]
    scores: tuple[tuple[float, ...], ...]  # rows = raters, columns = subjects

    def __post_init__(self):
        object.__setattr__(self, "raters", tuple(self.raters))
        object.__setattr__(self, "subjects", tuple(self.subjects))
        object.__setattr__(
            self, "scores", tuple(tuple(float(v) for v in row) for row in self.scores)
        )
        if len(self.scores) != len(self.raters):
            raise ScoringError("score rows must match rater count")
        for row in self.scores:
            if len(row) != len(self.subjects):
                raise ScoringError("score row length must match subject count")
            for v in row:
                if not (SCORE_MIN <= v <= SCORE_MAX):
                    raise ScoringError(f"score {v} outside [{SCORE_MIN:g}, {SCORE_MAX:g}]")

    def to_array(self) -> np.ndarray:
        return np.array(self.scores, dtype=float)


@dataclass(frozen=True)
class MetricSummary:
    metric: str
    subjects: tuple[str, ...]
    means: tuple[float, ...]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.subjects, self.means))


@dataclass(frozen=True)
class CompositeScore:
    subject: str
    score: float
    contributions: dict[str, float]  # metric -> w_i * s_i


@dataclass(frozen=True)
class RankedScore:
    rank: int
    subject: str
    score: float


def metric_means(t: RatingTable) -> MetricSummary:
    """Arithmetic mean per subject column, unrounded."""
    if not t.raters or not t.subjects:
        raise EmptyTableError("rating table needs at least one rater and one subject")
    means = t.to_array().mean(axis=0)
    return MetricSummary(t.metric, t.subjects, tuple(float(v) for v in means))


def composite_scores(summaries: list[MetricSummary],
                     weights: PriorityVector) -> list[CompositeScore]:
    """Weighted sum of per-metric means, one composite per subject.

    No renormalization: callers are expected to pass weights that sum to 1.
    """
    by_metric = {s.metric: s for s in summaries}
    if set(by_metric) != set(weights.labels) or len(summaries) != len(weights.labels):
        raise MetricMismatchError(
            f"summaries cover {sorted(by_metric)} but weights cover {sorted(weights.labels)}")
    subjects = summaries[0].subjects
    for s in summaries:
        if s.subjects != subjects:
            raise SubjectMismatchError(f"subject list differs in metric {s.metric!r}")
    out = []
    for idx, subject in enumerate(subjects):
        contributions = {
            metric: weights.as_dict()[metric] * by_metric[metric].means[idx]
            for metric in weights.labels
        }
        out.append(CompositeScore(subject, float(sum(contributions.values())), contributions))
    return out


def rank(composites: list[CompositeScore]) -> list[RankedScore]:
    """Competition ranking, descending by score; ties share a rank and are
    displayed in lexicographic subject order."""
    if not composites:
        raise ScoringError("nothing to rank")
    ordered = sorted(composites, key=lambda c: (-c.score, c.subject))
    out: list[RankedScore] = []
    for pos, c in enumerate(ordered):
        if out and c.score == ordered[pos - 1].score:
            r = out[-1].rank
        else:
            r = pos + 1
        out.append(RankedScore(r, c.subject, c.score))
    return out


def read_rating_csv(path: str | Path, metric: str | None = None) -> RatingTable:
    """CSV ingest: header row = subjects, first column = rater name.

    The metric defaults to the file stem. Gaps are rejected, not imputed.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8-sig") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows[0]) < 2:
        raise EmptyTableError(f"{path}: no subject columns")
    subjects = tuple(h.strip() for h in rows[0][1:])
    raters, scores = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(subjects) + 1 or any(not cell.strip() for cell in row):
            raise ScoringError(f"{path}:{lineno}: incomplete row")
        raters.append(row[0].strip())
        scores.append(tuple(float(cell) for cell in row[1:]))
    return RatingTable(metric or path.stem, tuple(raters), subjects, tuple(scores))


def write_rating_csv(t: RatingTable, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rater", *t.subjects])
        for rater, row in zip(t.raters, t.scores):
            writer.writerow([rater, *[f"{v:g}" for v in row]])


def report_json(summaries: list[MetricSummary], weights: PriorityVector,
                composites: list[CompositeScore]) -> str:
    ranking = rank(composites)
    return json.dumps({
        "weights": weights.as_dict(),
        "means": {s.metric: s.as_dict() for s in summaries},
        "composites": [
            {"subject": c.subject, "score": c.score, "contributions": c.contributions}
            for c in composites
        ],
        "ranking": [{"rank": r.rank, "subject": r.subject, "score": r.score}
                    for r in ranking],
    }, indent=2, sort_keys=True)


def report_text(summaries: list[MetricSummary], weights: PriorityVector,
                composites: list[CompositeScore]) -> str:
    """Aligned plain-text report: weights to 4 decimals, means to 1, composites to 2."""
    subjects = summaries[0].subjects
    name_w = max(len("metric"), *(len(s.metric) for s in summaries))
    col_w = max(10, *(len(s) for s in subjects))
    lines = ["Weights"]
    for label in weights.labels:
        lines.append(f"  {label:<{name_w}}  {weights.as_dict()[label]:.4f}")
    lines.append("")
    header = f"  {'metric':<{name_w}}  " + "  ".join(f"{s:>{col_w}}" for s in subjects)
    lines.append("Per-metric means")
    lines.append(header)
    for s in summaries:
        lines.append(f"  {s.metric:<{name_w}}  "
                     + "  ".join(f"{v:>{col_w}.1f}" for v in s.means))
    lines.append("")
    lines.append("Composite scores")
    for r in rank(composites):
        lines.append(f"  {r.rank}. {r.subject:<{col_w}}  {r.score:.2f}")
    return "\n".join(lines) + "\n"
