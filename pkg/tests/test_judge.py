import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mceval import judge, scoring
from mceval.backends import ReplayBackend

from conftest import (PUBLISHED_JUDGE_MEANS, PUBLISHED_JUDGE_ROWS,
                      KNOWN_TRANSCRIPT_DISCREPANCIES, SUBJECTS, load_task,
                      transcript_dir)


class ScriptedBackend:
    """Returns a fixed reply, or a per-run reply from a callable."""

    backend_id = "scripted"

    def __init__(self, reply):
        self.reply = reply
        self.calls = 0

    def complete(self, prompt, run_index=0):
        self.calls += 1
        if callable(self.reply):
            return self.reply(prompt, run_index)
        return self.reply


class TestRenderPrompt:
    def test_six_answer_blocks(self):
        text = judge.render_prompt(load_task("wind"))
        assert "[The Start of Assistant 6's Answer]" in text
        assert "[The End of Assistant 6's Answer]" in text
        assert "six AI assistants" in text
        assert "scale of 0 to 100" in text

    def test_single_assistant(self):
        task = judge.JudgeTask("q?", (("only", "answer text"),))
        text = judge.render_prompt(task)
        assert "scores for Assistant 1, respectively" in text
        assert text.count("[The Start of") == 1

    def test_question_appears_verbatim(self):
        task = judge.JudgeTask("hello", (("a", "x"), ("b", "y")))
        text = judge.render_prompt(task)
        assert "\nhello\n" in text

    def test_permutation_reorders_answer_blocks(self):
        task = judge.JudgeTask("q?", (("first", "AAA"), ("second", "BBB")))
        text = judge.render_prompt(task, permutation=(1, 0))
        assert text.index("BBB") < text.index("AAA")
        assert "[The Start of Assistant 1's Answer]\nBBB" in text


class TestParseScores:
    def test_single_line_rule_with_trailing_period(self):
        reply = (transcript_dir("wind") / "run_1.txt").read_text()
        parsed = judge.parse_scores(reply, 6)
        assert parsed.scores == (95, 92, 90, 88, 85, 80)
        assert parsed.extraction_rule == "R1"
        assert parsed.raw_reply == reply

    def test_labelled_rule(self):
        reply = (transcript_dir("wind") / "run_2.txt").read_text()
        parsed = judge.parse_scores(reply, 6)
        assert parsed.scores == (95, 90, 92, 88, 93, 85)
        assert parsed.extraction_rule == "R3"

    def test_score_annotation_rule(self):
        reply = (transcript_dir("wind") / "run_3.txt").read_text()
        parsed = judge.parse_scores(reply, 6)
        assert parsed.scores == (95, 90, 92, 88, 85, 80)
        assert parsed.extraction_rule == "R4"

    def test_bare_line_rule_later_in_reply(self):
        reply = "Scores follow on the next line:\n90 80 70\nThat is all."
        parsed = judge.parse_scores(reply, 3)
        assert parsed.scores == (90, 80, 70)
        assert parsed.extraction_rule == "R2"

    def test_solar_first_lines(self):
        reply = (transcript_dir("solar") / "run_5.txt").read_text()
        parsed = judge.parse_scores(reply, 6)
        assert parsed.scores == (92, 88, 96, 85, 90, 72)
        assert parsed.extraction_rule == "R1"

    def test_no_scores_fails(self):
        with pytest.raises(judge.ParseFailure):
            judge.parse_scores("no scores here", 6)

    def test_out_of_range_is_an_error_not_a_clamp(self):
        with pytest.raises(judge.OutOfRangeError):
            judge.parse_scores("120 50 50", 3)

    def test_fractional_scores_accepted(self):
        parsed = judge.parse_scores("90.5 80.25", 2)
        assert parsed.scores == (90.5, 80.25)

    def test_all_ten_transcripts_parse(self):
        for domain in ("wind", "solar"):
            for k in range(1, 6):
                reply = (transcript_dir(domain) / f"run_{k}.txt").read_text()
                parsed = judge.parse_scores(reply, 6)
                assert len(parsed.scores) == 6

    def test_parser_determinism(self):
        reply = (transcript_dir("solar") / "run_2.txt").read_text()
        first = judge.parse_scores(reply, 6)
        second = judge.parse_scores(reply, 6)
        assert first.scores == second.scores
        assert first.extraction_rule == second.extraction_rule


class TestRunJudging:
    def test_replay_wind_transcripts(self):
        backend = ReplayBackend(transcript_dir("wind"))
        runs = judge.run_judging(load_task("wind"), judge.JudgeConfig(runs=5), backend)
        assert [r.run_index for r in runs] == [0, 1, 2, 3, 4]
        assert all(r.ok for r in runs)
        for run, published in zip(runs, PUBLISHED_JUDGE_ROWS["wind"]):
            for label, got, expected in zip(SUBJECTS, run.parsed.scores, published):
                key = ("wind", run.run_index + 1, label)
                if key in KNOWN_TRANSCRIPT_DISCREPANCIES:
                    assert got == KNOWN_TRANSCRIPT_DISCREPANCIES[key][0]
                else:
                    assert got == expected

    def test_single_run(self):
        backend = ScriptedBackend("50 60\nfine.")
        task = judge.JudgeTask("q?", (("a", "x"), ("b", "y")))
        runs = judge.run_judging(task, judge.JudgeConfig(runs=1), backend)
        assert len(runs) == 1
        assert runs[0].parsed.scores == (50, 60)

    def test_permutation_round_trip_with_seed(self):
        task = judge.JudgeTask("q?", tuple((f"a{i}", f"t{i}") for i in range(6)))
        base = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0)
        cfg = judge.JudgeConfig(runs=4, permute_order=True, seed=99)
        # Reconstruct the same per-run permutations the harness will draw,
        # and reply with scores in the permuted (rendered) order.
        rng = random.Random(cfg.seed)
        perms = []
        for _ in range(cfg.runs):
            perm = list(range(6))
            rng.shuffle(perm)
            perms.append(tuple(perm))

        def reply(prompt, run_index):
            permuted = [base[orig] for orig in perms[run_index]]
            return " ".join(f"{v:g}" for v in permuted)

        runs = judge.run_judging(task, cfg, ScriptedBackend(reply))
        for run in runs:
            assert run.permutation == perms[run.run_index]
            assert run.parsed.scores == base

    def test_failed_parse_retried_then_surfaced(self):
        backend = ScriptedBackend("still no numbers")
        task = judge.JudgeTask("q?", (("a", "x"),))
        cfg = judge.JudgeConfig(runs=2, retry_limit=2)
        with pytest.raises(judge.AllRunsFailedError):
            judge.run_judging(task, cfg, backend)
        assert backend.calls == 2 * 3  # each run tried 1 + retry_limit times

    def test_partial_failures_do_not_abort_siblings(self):
        def reply(prompt, run_index):
            return "70 80" if run_index != 1 else "words only"

        task = judge.JudgeTask("q?", (("a", "x"), ("b", "y")))
        cfg = judge.JudgeConfig(runs=3, retry_limit=0)
        runs = judge.run_judging(task, cfg, ScriptedBackend(reply))
        assert [r.ok for r in runs] == [True, False, True]
        assert runs[1].error is not None


class TestAggregateRuns:
    def test_solar_transcripts_reproduce_published_means(self):
        backend = ReplayBackend(transcript_dir("solar"))
        runs = judge.run_judging(load_task("solar"), judge.JudgeConfig(runs=5), backend)
        table, failed = judge.aggregate_runs(runs)
        assert failed == 0
        means = scoring.metric_means(table)
        assert means.means == pytest.approx(PUBLISHED_JUDGE_MEANS["solar"])

    def test_single_run_table(self):
        backend = ScriptedBackend("40 50")
        task = judge.JudgeTask("q?", (("a", "x"), ("b", "y")))
        runs = judge.run_judging(task, judge.JudgeConfig(runs=1), backend)
        table, failed = judge.aggregate_runs(runs)
        assert table.raters == ("run 1",)
        assert table.subjects == ("a", "b")
        assert failed == 0

    def test_failures_excluded_and_counted(self):
        def reply(prompt, run_index):
            return "70 80" if run_index in (0, 2, 4) else "nope"

        task = judge.JudgeTask("q?", (("a", "x"), ("b", "y")))
        cfg = judge.JudgeConfig(runs=5, retry_limit=0)
        runs = judge.run_judging(task, cfg, ScriptedBackend(reply))
        table, failed = judge.aggregate_runs(runs)
        assert len(table.raters) == 3
        assert failed == 2

    def test_aggregation_delegates_to_metric_means(self):
        backend = ReplayBackend(transcript_dir("wind"))
        runs = judge.run_judging(load_task("wind"), judge.JudgeConfig(runs=5), backend)
        table, _ = judge.aggregate_runs(runs)
        # The aggregate is exactly what the scoring module computes.
        assert scoring.metric_means(table).means == pytest.approx(
            tuple(sum(col) / len(col) for col in zip(
                *(r.parsed.scores for r in runs))))

    def test_no_successful_runs_rejected(self):
        with pytest.raises(judge.NoSuccessfulRunsError):
            judge.aggregate_runs([judge.JudgeRun(0, (0,), None, ("a",),
                                                 "scripted", 0.0, error="x")])


class TestProperties:
    @given(st.integers(1, 10).flatmap(
        lambda n: st.tuples(st.permutations(list(range(n))),
                            st.lists(st.floats(0, 100), min_size=n, max_size=n))))
    @settings(max_examples=80, deadline=None)
    def test_depermutation_round_trip(self, perm_and_scores):
        perm, original = perm_and_scores
        perm = tuple(perm)
        rendered = tuple(original[orig] for orig in perm)
        assert judge.invert_permutation(perm, rendered) == tuple(original)

    @given(st.lists(st.integers(0, 10000).map(lambda v: v / 100),
                    min_size=1, max_size=10))
    @settings(max_examples=60, deadline=None)
    def test_render_parse_round_trip(self, values):
        reply = " ".join(f"{v:.2f}" for v in values) + "\nexplanation follows."
        parsed = judge.parse_scores(reply, len(values))
        assert parsed.extraction_rule == "R1"
        assert parsed.scores == pytest.approx(tuple(values))
