"""Analyzer backends for the three-step story analysis.

An analyzer answers one of three request kinds (``segment`` / ``extract`` /
``classify``) with raw response text; the pipeline owns parsing and
validation. Two backends ship here: an HTTP client for a chat-completion
style endpoint, and a replay analyzer that serves canned responses keyed
by request kind and the SHA-256 of the request payload.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from importlib import resources
from typing import Protocol

import httpx

from .errors import AnalyzerUnavailable, ConfigError

REQUEST_KINDS = ("segment", "extract", "classify")


def load_prompt(kind: str) -> str:
    """Return the versioned system prompt for one request kind."""
    if kind not in REQUEST_KINDS:
        raise ValueError(f"unknown request kind: {kind}")
    ref = resources.files("motioncomic.resources.prompts").joinpath(f"{kind}.txt")
    return ref.read_text(encoding="utf-8")


def payload_digest(payload: str) -> str:
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class AnalyzerContract(Protocol):
    """Stateless request/response contract; safe to call concurrently."""

    max_retries: int

    def complete(self, kind: str, payload: str) -> str:
        """Return raw response text for one request. May raise AnalyzerUnavailable."""
        ...


@dataclass(frozen=True)
class LlmAnalyzerConfig:
    base_url: str
    api_key: str
    model: str
    timeout_s: float = 60.0
    max_retries: int = 2

    def __post_init__(self):
        if not self.base_url:
            raise ConfigError("analyzer base_url must be non-empty")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")

    @classmethod
    def from_env(cls, env: dict | None = None) -> "LlmAnalyzerConfig":
        env = dict(os.environ if env is None else env)
        base_url = env.get("DB_LLM_BASE_URL", "")
        api_key = env.get("DB_LLM_API_KEY", "")
        model = env.get("DB_LLM_MODEL", "gpt-4o")
        if not base_url or not api_key:
            raise ConfigError("DB_LLM_BASE_URL and DB_LLM_API_KEY must be set")
        return cls(
            base_url=base_url,
            api_key=api_key,
            model=model,
            timeout_s=float(env.get("DB_LLM_TIMEOUT_S", "60")),
            max_retries=int(env.get("DB_LLM_MAX_RETRIES", "2")),
        )


class LlmAnalyzer:
    """Chat-completion client: system prompt per request kind, payload as user turn."""

    def __init__(self, config: LlmAnalyzerConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self.max_retries = config.max_retries
        self._transport = transport

    def complete(self, kind: str, payload: str) -> str:
        body = {
            "model": self.config.model,
            "messages": [
                {"role": "system", "content": load_prompt(kind)},
                {"role": "user", "content": payload},
            ],
            "temperature": 0,
        }
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        headers = {"Authorization": f"Bearer {self.config.api_key}"}
        try:
            with httpx.Client(transport=self._transport, timeout=self.config.timeout_s) as client:
                resp = client.post(url, json=body, headers=headers)
                resp.raise_for_status()
                data = resp.json()
            return data["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise AnalyzerUnavailable(f"analyzer transport failed: {exc}") from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise AnalyzerUnavailable(f"analyzer returned an unusable envelope: {exc}") from exc


class FixtureAnalyzer:
    """Replays canned responses; byte-identical and fully deterministic.

    Fixture file layout::

        {"segment": {"<sha256 of payload>": "<response text>"}, "extract": {...}, ...}
    """

    max_retries = 0

    def __init__(self, table: dict[str, dict[str, str]]):
        self._table = {k: dict(v) for k, v in table.items()}

    @classmethod
    def from_file(cls, path: str) -> "FixtureAnalyzer":
        with open(path, "r", encoding="utf-8") as f:
            return cls(json.load(f))

    def complete(self, kind: str, payload: str) -> str:
        digest = payload_digest(payload)
        try:
            return self._table[kind][digest]
        except KeyError:
            raise AnalyzerUnavailable(
                f"no canned response for {kind} request {digest[:12]}…",
                detail={"kind": kind, "sha256": digest},
            ) from None

    # Used by the fixture builder; keeps the on-disk format in one place.
    @staticmethod
    def entry(payload: str, response: str) -> tuple[str, str]:
        return payload_digest(payload), response
