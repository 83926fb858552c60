"""HTTP service for evaluation sessions.

A session fixes the metric and subject lists, then collects pairwise
judgments (with live consistency feedback once the matrix is complete),
expert ratings, and judge runs. State persists as one JSON snapshot per
session, written atomically.
"""

from __future__ import annotations

import json
import threading
import uuid
from collections import defaultdict
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import ahp, judge, scoring
from .backends import HttpChatBackend, ReplayBackend

RI_TABLES = {"saaty": ahp.SAATY_RI, "alternate": ahp.ALTERNATE_RI}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details if details is not None else {}


class SessionStore:
    """One JSON snapshot file per session; single writer per session."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._guard = threading.Lock()

    def lock(self, session_id: str) -> threading.Lock:
        with self._guard:
            return self._locks[session_id]

    def path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def load(self, session_id: str) -> dict:
        path = self.path(session_id)
        if not path.is_file():
            raise ApiError(404, "UnknownSession", f"no session {session_id}")
        return json.loads(path.read_text(encoding="utf-8"))

    def save(self, state: dict) -> None:
        path = self.path(state["id"])
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(state, indent=2, sort_keys=True) + "\n",
                       encoding="utf-8")
        tmp.replace(path)


class CreateSessionBody(BaseModel):
    metrics: list[str]
    subjects: list[str]
    config: dict = {}


class JudgmentBody(BaseModel):
    i: int
    j: int
    value: float


class RatingBody(BaseModel):
    expert: str
    subject: str
    metric: str
    score: float


class JudgeJobBody(BaseModel):
    task: dict
    config: dict = {}
    replay_dir: str | None = None
    backend: dict | None = None


def _ahp_config(session_config: dict, mode: str | None = None) -> ahp.AhpConfig:
    ri_name = session_config.get("ri_table", "saaty")
    if ri_name not in RI_TABLES:
        raise ApiError(400, "BadRequest", f"unknown ri_table {ri_name!r}")
    return ahp.AhpConfig(
        reciprocity_mode=mode or session_config.get("reciprocity_mode", "strict"),
        ri_table=dict(RI_TABLES[ri_name]),
        cr_threshold=session_config.get("cr_threshold", 0.1),
    )


def _matrix_complete(state: dict) -> bool:
    grid = state["judgment"]
    n = len(state["metrics"])
    return all(grid[i][j] is not None for i in range(n) for j in range(n) if i != j)


def _cells_remaining(state: dict) -> int:
    grid = state["judgment"]
    n = len(state["metrics"])
    # Upper-triangle count; in strict mode cells fill in reciprocal pairs.
    return sum(1 for i in range(n) for j in range(i + 1, n) if grid[i][j] is None)


def _judgment_matrix(state: dict) -> ahp.JudgmentMatrix:
    return ahp.JudgmentMatrix(tuple(state["metrics"]),
                              tuple(tuple(row) for row in state["judgment"]))


def _live_consistency(state: dict) -> dict:
    if not _matrix_complete(state):
        return {"complete": False, "cells_remaining": _cells_remaining(state),
                "report": None}
    cfg = _ahp_config(state["config"])
    try:
        weights, cons = ahp.derive_weights(_judgment_matrix(state), cfg)
    except ahp.ValidationFailedError as exc:
        raise ApiError(400, "BadRequest", "matrix failed validation",
                       {"violations": list(exc.report.errors)})
    return {
        "complete": True,
        "cells_remaining": 0,
        "report": json.loads(cons.to_json()),
        "weights": weights.as_dict(),
    }


def _metric_summaries(state: dict) -> list[scoring.MetricSummary]:
    subjects = tuple(state["subjects"])
    ratings = state["ratings"]
    summaries = []
    gaps = []
    for metric in state["metrics"]:
        means = []
        for subject in subjects:
            cell = [r["score"] for r in ratings
                    if r["metric"] == metric and r["subject"] == subject]
            if not cell:
                gaps.append({"metric": metric, "subject": subject})
                means.append(0.0)
            else:
                means.append(sum(cell) / len(cell))
        summaries.append(scoring.MetricSummary(metric, subjects, tuple(means)))
    if gaps:
        raise ApiError(409, "MissingRatings", "ratings missing for some cells",
                       {"gaps": gaps})
    return summaries


def create_app(data_dir: str | Path) -> FastAPI:
    app = FastAPI(title="mceval")
    store = SessionStore(data_dir)
    jobs: dict[str, dict] = {}
    jobs_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={
            "code": exc.code, "message": exc.message, "details": exc.details})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if len(body.metrics) < 2:
            raise ApiError(400, "BadRequest", "need at least 2 metrics")
        if len(body.subjects) < 1:
            raise ApiError(400, "BadRequest", "need at least 1 subject")
        if len(set(body.metrics)) != len(body.metrics):
            raise ApiError(400, "BadRequest", "duplicate metric names")
        if len(set(body.subjects)) != len(body.subjects):
            raise ApiError(400, "BadRequest", "duplicate subject names")
        _ahp_config(body.config)  # validate config early
        n = len(body.metrics)
        state = {
            "id": uuid.uuid4().hex,
            "metrics": list(body.metrics),
            "subjects": list(body.subjects),
            "config": body.config,
            "judgment": [[1.0 if i == j else None for j in range(n)]
                         for i in range(n)],
            "ratings": [],
            "judge_runs": {},
        }
        store.save(state)
        return {"id": state["id"], "cells_remaining": _cells_remaining(state)}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return store.load(session_id)

    @app.put("/sessions/{session_id}/judgments")
    def submit_judgment(session_id: str, body: JudgmentBody):
        with store.lock(session_id):
            state = store.load(session_id)
            n = len(state["metrics"])
            if not (0 <= body.i < n and 0 <= body.j < n) or body.i == body.j:
                raise ApiError(400, "BadCell", f"bad cell ({body.i}, {body.j})")
            if body.value <= 0:
                raise ApiError(400, "NonPositiveValue",
                               f"judgment value must be positive, got {body.value}")
            mode = state["config"].get("reciprocity_mode", "strict")
            state["judgment"][body.i][body.j] = body.value
            if mode == "strict":
                state["judgment"][body.j][body.i] = 1.0 / body.value
            live = _live_consistency(state)
            store.save(state)
        return live

    @app.post("/sessions/{session_id}/ratings")
    def submit_rating(session_id: str, body: RatingBody):
        with store.lock(session_id):
            state = store.load(session_id)
            if body.subject not in state["subjects"]:
                raise ApiError(400, "UnknownName", f"unknown subject {body.subject!r}")
            if body.metric not in state["metrics"]:
                raise ApiError(400, "UnknownName", f"unknown metric {body.metric!r}")
            if not (scoring.SCORE_MIN <= body.score <= scoring.SCORE_MAX):
                raise ApiError(400, "OutOfRange", f"score {body.score} outside [0, 100]")
            entry = {"expert": body.expert, "subject": body.subject,
                     "metric": body.metric, "score": body.score}
            for existing in state["ratings"]:
                if (existing["expert"], existing["subject"], existing["metric"]) == \
                        (body.expert, body.subject, body.metric):
                    existing["score"] = body.score
                    break
            else:
                state["ratings"].append(entry)
            store.save(state)
            return {"accepted": len(state["ratings"])}

    @app.get("/sessions/{session_id}/weights")
    def get_weights(session_id: str):
        state = store.load(session_id)
        if not _matrix_complete(state):
            raise ApiError(409, "MatrixIncomplete",
                           f"{_cells_remaining(state)} cells remaining")
        return _live_consistency(state)

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str):
        state = store.load(session_id)
        if not _matrix_complete(state):
            raise ApiError(409, "MatrixIncomplete",
                           f"{_cells_remaining(state)} cells remaining")
        cfg = _ahp_config(state["config"])
        try:
            weights, cons = ahp.derive_weights(_judgment_matrix(state), cfg)
        except ahp.ValidationFailedError as exc:
            raise ApiError(400, "BadRequest", "matrix failed validation",
                           {"violations": list(exc.report.errors)})
        if not cons.passed:
            raise ApiError(409, "InconsistentMatrix",
                           f"CR {cons.cr:.4f} >= {cons.threshold}")
        summaries = _metric_summaries(state)
        composites = scoring.composite_scores(summaries, weights)
        ranking = scoring.rank(composites)
        return {
            "weights": weights.as_dict(),
            "consistency": json.loads(cons.to_json()),
            "means": {s.metric: s.as_dict() for s in summaries},
            "composites": [{"subject": c.subject, "score": c.score,
                            "contributions": c.contributions} for c in composites],
            "ranking": [{"rank": r.rank, "subject": r.subject, "score": r.score}
                        for r in ranking],
            "judge_runs": state["judge_runs"],
        }

    def _run_job(job_id: str, session_id: str, task: judge.JudgeTask,
                 cfg: judge.JudgeConfig, backend) -> None:
        try:
            runs = judge.run_judging(task, cfg, backend)
        except judge.JudgeError as exc:
            with jobs_lock:
                jobs[job_id].update(status="failed", error=str(exc))
            return
        run_dicts = [{
            "run_index": r.run_index,
            "permutation": list(r.permutation),
            "scores": list(r.parsed.scores) if r.ok else None,
            "extraction_rule": r.parsed.extraction_rule if r.ok else None,
            "labels": list(r.labels),
            "error": r.error,
        } for r in runs]
        with store.lock(session_id):
            state = store.load(session_id)
            state["judge_runs"][job_id] = run_dicts
            store.save(state)
        with jobs_lock:
            jobs[job_id].update(status="completed", runs=run_dicts)

    @app.post("/sessions/{session_id}/judge-jobs", status_code=202)
    def start_judge_job(session_id: str, body: JudgeJobBody):
        store.load(session_id)  # 404 on unknown session
        try:
            task = judge.JudgeTask(
                body.task["question"],
                tuple((a["label"], a["text"]) for a in body.task["answers"]))
            cfg = judge.JudgeConfig(**body.config)
        except (KeyError, TypeError, judge.JudgeError) as exc:
            raise ApiError(400, "BadRequest", f"bad judge job: {exc}")
        if body.replay_dir:
            try:
                backend = ReplayBackend(body.replay_dir)
            except judge.BackendUnavailableError as exc:
                raise ApiError(400, "BackendUnavailable", str(exc))
        elif body.backend:
            backend = HttpChatBackend(**body.backend)
        else:
            raise ApiError(400, "BackendUnavailable",
                           "no replay_dir or backend configured")
        job_id = uuid.uuid4().hex
        with jobs_lock:
            jobs[job_id] = {"status": "running", "session_id": session_id,
                            "runs": None, "error": None}
        thread = threading.Thread(target=_run_job,
                                  args=(job_id, session_id, task, cfg, backend),
                                  daemon=True)
        thread.start()
        return {"job_id": job_id}

    @app.get("/judge-jobs/{job_id}")
    def poll_job(job_id: str):
        with jobs_lock:
            job = jobs.get(job_id)
            if job is None:
                raise ApiError(404, "UnknownJob", f"no job {job_id}")
            return {"job_id": job_id, **job}

    return app
