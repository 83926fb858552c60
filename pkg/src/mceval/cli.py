"""Command-line front door. Every subcommand is a thin composition over the
library modules; machine-readable outputs go to files, a human summary to
stdout."""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import ahp, corpus, judge, scoring
from .backends import DEFAULT_SECRET_ENV, HttpChatBackend, ReplayBackend

RI_TABLES = {"saaty": ahp.SAATY_RI, "alternate": ahp.ALTERNATE_RI}


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON config file with default option values.")
@click.option("--data-dir", type=click.Path(), default="./mceval-data",
              show_default=True, help="Directory for service session snapshots.")
@click.option("--no-timestamps", is_flag=True,
              help="Suppress timestamps on summary lines (for reproducible output).")
@click.pass_context
def main(ctx, config_path, data_dir, no_timestamps):
    """Multi-criteria LLM evaluation workbench."""
    ctx.ensure_object(dict)
    cfg = {}
    if config_path:
        cfg = json.loads(Path(config_path).read_text(encoding="utf-8"))
    ctx.obj.update(config=cfg, data_dir=data_dir, no_timestamps=no_timestamps)


def _stamp(ctx) -> str:
    if ctx.obj.get("no_timestamps"):
        return ""
    return datetime.now(timezone.utc).strftime(" [%Y-%m-%dT%H:%M:%SZ]")


@main.group("corpus")
def corpus_group():
    """Bibliographic corpus commands."""


@corpus_group.command("build")
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["wos-tab", "csv", "jsonl"]),
              default="wos-tab", show_default=True)
@click.option("--keywords", "keywords_path", type=click.Path(exists=True),
              help="File with one keyword phrase per line (default: built-in list).")
@click.option("--pairs", "pairs_path", type=click.Path(), default="pairs.jsonl",
              show_default=True)
@click.option("--stats", "stats_path", type=click.Path(), default="stats.json",
              show_default=True)
@click.option("--top-sources", "top_k", type=int, default=20, show_default=True)
@click.pass_context
def corpus_build(ctx, input_path, fmt, keywords_path, pairs_path, stats_path, top_k):
    """Parse, filter, dedupe, and emit instruction pairs plus corpus stats."""
    keywords = corpus.DEFAULT_KEYWORDS
    if keywords_path:
        lines = Path(keywords_path).read_text(encoding="utf-8").splitlines()
        keywords = tuple(ln.strip() for ln in lines if ln.strip())
    try:
        records, diagnostics = corpus.parse_records(input_path, fmt)
    except corpus.CorpusError as exc:
        _fail(str(exc))
    matched = corpus.filter_records(records, corpus.KeywordFilter(keywords))
    unique, removed = corpus.dedupe(matched)
    pairs, skipped = corpus.build_pairs(unique)
    corpus_stats = corpus.stats(unique, top_k, skipped_no_abstract=skipped,
                                duplicates_removed=removed)
    corpus.write_pairs_jsonl(pairs, pairs_path)
    Path(stats_path).write_text(corpus_stats.to_json() + "\n", encoding="utf-8")
    for diag in diagnostics:
        click.echo(f"warning: line {diag.line}: {diag.message}", err=True)
    click.echo(f"kept {len(pairs)} / skipped {skipped} / deduped {removed}"
               f"{_stamp(ctx)}")


@main.group("ahp")
def ahp_group():
    """Pairwise-comparison weight derivation."""


@ahp_group.command("weights")
@click.argument("matrix_path", type=click.Path(exists=True))
@click.option("--ri-table", type=click.Choice(sorted(RI_TABLES)), default="saaty",
              show_default=True)
@click.option("--mode", type=click.Choice(["strict", "lenient"]), default="strict",
              show_default=True)
@click.option("--strict-consistency", is_flag=True,
              help="Fail (exit 1) when CR is at or above the threshold.")
@click.option("--out", "out_path", type=click.Path(),
              help="Write weights + consistency report as JSON.")
def ahp_weights(matrix_path, ri_table, mode, strict_consistency, out_path):
    """Derive priority weights and consistency diagnostics from a matrix file."""
    matrix = ahp.JudgmentMatrix.from_json(Path(matrix_path).read_text(encoding="utf-8"))
    cfg = ahp.AhpConfig(reciprocity_mode=mode, ri_table=dict(RI_TABLES[ri_table]),
                        strict_consistency=strict_consistency)
    try:
        weights, cons = ahp.derive_weights(matrix, cfg)
    except (ahp.ValidationFailedError, ahp.InconsistentMatrixError,
            ahp.NoConvergenceError) as exc:
        _fail(str(exc))
    for label, w in weights.as_dict().items():
        click.echo(f"{label}: {w:.4f}")
    click.echo(f"lambda_max: {cons.lambda_max:.4f}")
    click.echo(f"CI: {cons.ci:.4f}")
    click.echo(f"CR: {cons.cr:.4f} ({'pass' if cons.passed else 'fail'},"
               f" threshold {cons.threshold})")
    if out_path:
        doc = {"weights": json.loads(weights.to_json()),
               "consistency": json.loads(cons.to_json())}
        Path(out_path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                                  encoding="utf-8")


@main.group("judge")
def judge_group():
    """LLM-as-judge runs."""


@judge_group.command("run")
@click.argument("task_path", type=click.Path(exists=True))
@click.option("--replay", "replay_dir", type=click.Path(exists=True, file_okay=False),
              help="Directory of run_<k>.txt transcripts (deterministic).")
@click.option("--backend-url", help="Chat-completion base URL for live judging.")
@click.option("--model", help="Model id for the live backend.")
@click.option("--runs", type=int, default=5, show_default=True)
@click.option("--permute-order", is_flag=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default="judge_scores.csv",
              show_default=True,
              help=f"Per-run score table CSV. Live backend reads the secret from "
                   f"${DEFAULT_SECRET_ENV}.")
def judge_run(task_path, replay_dir, backend_url, model, runs, permute_order,
              seed, out_path):
    """Run the judge and write a per-run score table with a means row."""
    task = judge.JudgeTask.from_file(task_path)
    if replay_dir:
        backend = ReplayBackend(replay_dir)
    elif backend_url and model:
        backend = HttpChatBackend(backend_url, model)
    else:
        raise click.UsageError("select a backend: --replay DIR or --backend-url + --model")
    cfg = judge.JudgeConfig(runs=runs, permute_order=permute_order, seed=seed)
    try:
        run_list = judge.run_judging(task, cfg, backend)
        table, failed = judge.aggregate_runs(run_list)
    except judge.JudgeError as exc:
        _fail(str(exc))
    summary = scoring.metric_means(table)
    scoring.write_rating_csv(table, out_path)
    click.echo("subjects: " + ", ".join(table.subjects))
    for run in run_list:
        if run.ok:
            click.echo(f"run {run.run_index + 1}: "
                       + " ".join(f"{v:g}" for v in run.parsed.scores)
                       + f" ({run.parsed.extraction_rule})")
        else:
            click.echo(f"run {run.run_index + 1}: FAILED ({run.error})")
    click.echo("means: " + " ".join(f"{v:.1f}" for v in summary.means))
    if failed:
        click.echo(f"failed runs: {failed}", err=True)


@main.command("report")
@click.option("--ratings", "ratings_dir", type=click.Path(exists=True, file_okay=False),
              required=True, help="Directory with one rating CSV per metric.")
@click.option("--matrix", "matrix_path", type=click.Path(exists=True), required=True)
@click.option("--ri-table", type=click.Choice(sorted(RI_TABLES)), default="saaty",
              show_default=True)
@click.option("--mode", type=click.Choice(["strict", "lenient"]), default="strict",
              show_default=True)
@click.option("--out", "out_path", type=click.Path(),
              help="Write the full report as JSON.")
def report(ratings_dir, matrix_path, ri_table, mode, out_path):
    """Weighted composite report from rating CSVs and a judgment matrix."""
    matrix = ahp.JudgmentMatrix.from_json(Path(matrix_path).read_text(encoding="utf-8"))
    cfg = ahp.AhpConfig(reciprocity_mode=mode, ri_table=dict(RI_TABLES[ri_table]))
    try:
        weights, cons = ahp.derive_weights(matrix, cfg)
    except ahp.AhpError as exc:
        _fail(str(exc))

    def norm(name: str) -> str:
        return name.casefold().replace("_", " ").replace("-", " ")

    csv_files = {norm(p.stem): p for p in Path(ratings_dir).glob("*.csv")}
    summaries = []
    for label in matrix.labels:
        path = csv_files.get(norm(label))
        if path is None:
            _fail(f"missing ratings CSV for metric {label!r} in {ratings_dir}")
        table = scoring.read_rating_csv(path, metric=label)
        summaries.append(scoring.metric_means(table))
    try:
        composites = scoring.composite_scores(summaries, weights)
    except scoring.ScoringError as exc:
        _fail(str(exc))
    click.echo(scoring.report_text(summaries, weights, composites), nl=False)
    click.echo(f"lambda_max {cons.lambda_max:.4f}  CI {cons.ci:.4f}  "
               f"CR {cons.cr:.4f} ({'pass' if cons.passed else 'fail'})")
    if out_path:
        Path(out_path).write_text(
            scoring.report_json(summaries, weights, composites) + "\n",
            encoding="utf-8")


@main.command("serve")
@click.option("--addr", default="127.0.0.1:8080", show_default=True,
              help="listen address host:port")
@click.pass_context
def serve(ctx, addr):
    """Serve the evaluation session API until interrupted."""
    import uvicorn

    from .service import create_app

    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise click.UsageError(f"bad --addr {addr!r}, expected host:port")
    # Bind early for a clean diagnostic; the server itself exits with an
    # opaque status code when the port is taken.
    import socket
    probe = socket.socket()
    try:
        probe.bind((host, int(port)))
    except OSError as exc:
        _fail(f"cannot bind {addr}: {exc}")
    finally:
        probe.close()
    app = create_app(ctx.obj["data_dir"])
    try:
        uvicorn.run(app, host=host, port=int(port))
    except OSError as exc:
        _fail(f"cannot bind {addr}: {exc}")


if __name__ == "__main__":
    main()
