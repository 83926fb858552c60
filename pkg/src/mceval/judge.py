"""LLM-as-judge harness: prompt rendering, score parsing, run orchestration.

One judging task shows a question plus N assistant answers to a judge model
and asks for one 0-100 score per assistant. Replies arrive in free-form text,
so extraction goes through an ordered cascade of parse rules. Repeated runs
aggregate into a rating table whose raters are the run ids.
"""

from __future__ import annotations

import json
import random
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .scoring import RatingTable

_COUNT_WORDS = {1: "one", 2: "two", 3: "three", 4: "four", 5: "five",
                6: "six", 7: "seven", 8: "eight", 9: "nine", 10: "ten"}


class JudgeError(Exception):
    pass


class ParseFailure(JudgeError):
    pass


class OutOfRangeError(JudgeError):
    pass


class BackendUnavailableError(JudgeError):
    pass


class AllRunsFailedError(JudgeError):
    pass


class NoSuccessfulRunsError(JudgeError):
    pass


@dataclass(frozen=True)
class JudgeTask:
    question: str
    answers: tuple[tuple[str, str], ...]  # (assistant label, response text)

    def __post_init__(self):
        object.__setattr__(self, "answers", tuple(tuple(a) for a in self.answers))
        if not self.question.strip():
            raise JudgeError("question must be non-empty")
        if len(self.answers) < 1:
            raise JudgeError("need at least one answer")
        labels = [a[0] for a in self.answers]
        if len(set(labels)) != len(labels):
            raise JudgeError("assistant labels must be unique")
        if any(not text.strip() for _, text in self.answers):
            raise JudgeError("answer texts must be non-empty")

    @property
    def n(self) -> int:
        return len(self.answers)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a[0] for a in self.answers)

    @classmethod
    def from_json(cls, text: str) -> "JudgeTask":
        doc = json.loads(text)
        return cls(doc["question"],
                   tuple((a["label"], a["text"]) for a in doc["answers"]))

    @classmethod
    def from_file(cls, path: str | Path) -> "JudgeTask":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class JudgeConfig:
    runs: int = 5
    permute_order: bool = False
    concurrency_limit: int = 4
    retry_limit: int = 2
    score_min: float = 0.0
    score_max: float = 100.0
    seed: int = 0

    def __post_init__(self):
        if self.runs < 1 or self.concurrency_limit < 1:
            raise JudgeError("runs and concurrency_limit must be >= 1")
        if self.score_min >= self.score_max:
            raise JudgeError("score_min must be below score_max")


@dataclass(frozen=True)
class ParsedScores:
    scores: tuple[float, ...]        # original assistant order
    extraction_rule: str             # "R1".."R4"
    raw_reply: str


@dataclass(frozen=True)
class JudgeRun:
    run_index: int
    permutation: tuple[int, ...]     # rendered position -> original index
    parsed: ParsedScores | None
    labels: tuple[str, ...]
    backend_id: str
    elapsed_s: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.parsed is not None


def render_prompt(task: JudgeTask, permutation: tuple[int, ...] | None = None) -> str:
    """Render the multi-assistant judging template for n assistants.

    `permutation` maps rendered position -> original answer index; identity
    when omitted.
    """
    n = task.n
    perm = tuple(permutation) if permutation is not None else tuple(range(n))
    if sorted(perm) != list(range(n)):
        raise JudgeError(f"invalid permutation {perm}")
    count = _COUNT_WORDS.get(n, str(n))
    numbers = ", ".join(str(k) for k in range(1, n + 1))
    lines = [
        "[System]",
        f"We would like to request your feedback on the performance of {count} "
        "AI assistants in response to the user question displayed above.",
        "Please rate the helpfulness, relevance, accuracy, level of details of "
        "their responses. Each assistant receives an overall score on a scale "
        "of 0 to 100, where a higher score indicates better overall performance.",
        f"Please first output a single line containing only {count} values "
        f"indicating the scores for Assistant {numbers}, respectively.",
        f"The {count} scores are separated by a space. In the subsequent line, "
        "please provide a comprehensive explanation of your evaluation, "
        "avoiding any potential bias and ensuring that the order in which the "
        "responses were presented does not affect your judgment.",
        "",
        "[Question]",
        task.question,
        "",
    ]
    for pos, orig in enumerate(perm, start=1):
        lines.append(f"[The Start of Assistant {pos}'s Answer]")
        lines.append(task.answers[orig][1])
        lines.append(f"[The End of Assistant {pos}'s Answer]")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"


_NUMBER = r"-?\d+(?:\.\d+)?"


def _line_numbers(line: str) -> list[float] | None:
    """Numbers from a line consisting solely of numbers (commas and a
    trailing period tolerated), else None."""
    tokens = line.replace(",", " ").split()
    if not tokens:
        return None
    values = []
    for tok in tokens:
        if tok.endswith("."):
            tok = tok[:-1]
        if not re.fullmatch(_NUMBER, tok):
            return None
        values.append(float(tok))
    return values


def parse_scores(reply: str, n: int, cfg: JudgeConfig | None = None) -> ParsedScores:
    """Extract n scores from a free-form judge reply.

    Rules are tried in order; the first that yields exactly n numbers wins:
      R1  first non-empty line consists solely of n numbers
      R2  any line consisting solely of n numbers
      R3  labelled lines "Assistant k: <num>", first occurrence per k
      R4  "(Score: <num>)" or "score of <num>" adjacent to "Assistant k"
    Numbers outside the configured range are an error, never clamped.
    """
    cfg = cfg or JudgeConfig()
    if n < 1:
        raise JudgeError("n must be >= 1")

    def finish(values: list[float], rule: str) -> ParsedScores:
        bad = [v for v in values if not (cfg.score_min <= v <= cfg.score_max)]
        if bad:
            raise OutOfRangeError(
                f"{rule} found scores outside [{cfg.score_min:g}, {cfg.score_max:g}]: {bad}")
        return ParsedScores(tuple(values), rule, reply)

    lines = reply.splitlines()
    nonempty = [ln for ln in lines if ln.strip()]
    if nonempty:
        values = _line_numbers(nonempty[0])
        if values is not None and len(values) == n:
            return finish(values, "R1")
    for ln in lines:
        values = _line_numbers(ln)
        if values is not None and len(values) == n:
            return finish(values, "R2")
    labelled: dict[int, float] = {}
    for match in re.finditer(rf"Assistant\s+(\d+)\s*:\s*({_NUMBER})\b", reply):
        k = int(match.group(1))
        if 1 <= k <= n and k not in labelled:
            labelled[k] = float(match.group(2))
    if len(labelled) == n:
        return finish([labelled[k] for k in range(1, n + 1)], "R3")
    labelled = {}
    for match in re.finditer(
            rf"Assistant\s+(\d+)[^\n]*?(?:\(Score:\s*({_NUMBER})\)|score of ({_NUMBER}))",
            reply, re.IGNORECASE):
        k = int(match.group(1))
        if 1 <= k <= n and k not in labelled:
            labelled[k] = float(match.group(2) or match.group(3))
    if len(labelled) == n:
        return finish([labelled[k] for k in range(1, n + 1)], "R4")
    raise ParseFailure(f"no rule yielded {n} in-range scores")


def invert_permutation(perm: tuple[int, ...], values: tuple[float, ...]) -> tuple[float, ...]:
    """Scores parsed in rendered order -> scores in original assistant order."""
    out = [0.0] * len(perm)
    for pos, orig in enumerate(perm):
        out[orig] = values[pos]
    return tuple(out)


def run_judging(task: JudgeTask, cfg: JudgeConfig, backend) -> list[JudgeRun]:
    """Execute cfg.runs judge calls against a backend.

    Failed parses are retried with a fresh call up to retry_limit, then kept
    as per-run errors; sibling runs are unaffected. Results come back ordered
    by run index regardless of completion order.
    """
    rng = random.Random(cfg.seed)
    permutations = []
    for _ in range(cfg.runs):
        perm = list(range(task.n))
        if cfg.permute_order:
            rng.shuffle(perm)
        permutations.append(tuple(perm))

    def one_run(idx: int) -> JudgeRun:
        perm = permutations[idx]
        prompt = render_prompt(task, perm)
        start = time.monotonic()
        last_error = "no attempts made"
        for _attempt in range(cfg.retry_limit + 1):
            reply = backend.complete(prompt, run_index=idx)
            try:
                parsed = parse_scores(reply, task.n, cfg)
            except (ParseFailure, OutOfRangeError) as exc:
                last_error = str(exc)
                continue
            parsed = ParsedScores(invert_permutation(perm, parsed.scores),
                                  parsed.extraction_rule, parsed.raw_reply)
            return JudgeRun(idx, perm, parsed, task.labels, backend.backend_id,
                            time.monotonic() - start)
        return JudgeRun(idx, perm, None, task.labels, backend.backend_id,
                        time.monotonic() - start, error=last_error)

    with ThreadPoolExecutor(max_workers=cfg.concurrency_limit) as pool:
        runs = list(pool.map(one_run, range(cfg.runs)))
    if all(r.error for r in runs):
        raise AllRunsFailedError("; ".join(r.error or "" for r in runs))
    return runs


def aggregate_runs(runs: list[JudgeRun], metric: str = "judge") -> tuple[RatingTable, int]:
    """Collect successful runs into a rating table (raters = run ids).

    Returns the table and the count of failed runs that were excluded.
    """
    successes = [r for r in runs if r.ok]
    if not successes:
        raise NoSuccessfulRunsError("all runs failed")
    labels = successes[0].labels
    if any(r.labels != labels for r in successes):
        raise JudgeError("runs disagree on assistant labels")
    table = RatingTable(
        metric=metric,
        raters=tuple(f"run {r.run_index + 1}" for r in successes),
        subjects=labels,
        scores=tuple(r.parsed.scores for r in successes),
    )
    return table, len(runs) - len(successes)
