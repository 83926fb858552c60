"""Judge backends: a chat-completion HTTP client and a deterministic replay.

Both expose ``complete(prompt, run_index) -> str`` and a ``backend_id``.
All tests run against the replay backend; the HTTP backend is for live use.
"""

from __future__ import annotations

import os
import re
from pathlib import Path

import requests

from .judge import BackendUnavailableError

DEFAULT_SECRET_ENV = "MCEVAL_API_KEY"

_RUN_FILE = re.compile(r"run_(\d+)\.txt$")


class ReplayBackend:
    """Returns stored transcripts from a directory of run_<k>.txt files.

    Run k (0-based) maps to run_<k+1>.txt, so retries of the same run are
    deterministic. Safe for concurrent reads.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise BackendUnavailableError(f"replay directory {self.directory} not found")
        self._files: dict[int, Path] = {}
        for path in self.directory.iterdir():
            match = _RUN_FILE.match(path.name)
            if match:
                self._files[int(match.group(1))] = path
        if not self._files:
            raise BackendUnavailableError(f"no run_<k>.txt files in {self.directory}")
        self.backend_id = f"replay:{self.directory}"

    @property
    def run_count(self) -> int:
        return len(self._files)

    def complete(self, prompt: str, run_index: int = 0) -> str:
        path = self._files.get(run_index + 1)
        if path is None:
            raise BackendUnavailableError(
                f"no transcript run_{run_index + 1}.txt in {self.directory}")
        return path.read_text(encoding="utf-8")


class HttpChatBackend:
    """Single-turn chat-completion client.

    The secret is read from the environment, never passed inline. Extra
    request parameters (temperature etc.) are pass-through configuration.
    """

    def __init__(self, base_url: str, model: str,
                 secret_env: str = DEFAULT_SECRET_ENV,
                 timeout_s: float = 120.0,
                 extra_params: dict | None = None,
                 session: requests.Session | None = None):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.secret_env = secret_env
        self.timeout_s = timeout_s
        self.extra_params = dict(extra_params or {})
        self._session = session or requests.Session()
        self.backend_id = f"http:{self.base_url}:{model}"

    def complete(self, prompt: str, run_index: int = 0) -> str:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.secret_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            **self.extra_params,
        }
        try:
            resp = self._session.post(f"{self.base_url}/chat/completions",
                                      json=body, headers=headers,
                                      timeout=self.timeout_s)
        except requests.RequestException as exc:
            raise BackendUnavailableError(str(exc)) from exc
        if resp.status_code != 200:
            raise BackendUnavailableError(
                f"backend returned {resp.status_code}: {resp.text[:200]}")
        doc = resp.json()
        try:
            return doc["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendUnavailableError(f"malformed backend reply: {doc!r}") from exc
