"""Chat-completion dispatch with retry, replay caching and cost accounting.

Three modes: ``live`` talks to the configured endpoint, ``record`` does the
same and persists the response under its replay key, ``replay-strict``
serves cached responses only and performs zero network operations.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Protocol

import httpx

from .errors import (
    AuthenticationError,
    BudgetExceededError,
    CacheMissError,
    ExhaustedRetriesError,
    UketError,
)
from .prompting import ChatRequest

logger = logging.getLogger(__name__)

API_KEY_ENV = "LLM_API_KEY"

MODES = ("live", "replay-strict", "record")

# HTTP statuses worth retrying; everything else 4xx fails immediately.
TRANSIENT_STATUSES = frozenset({429, 500, 502, 503, 504})


@dataclass(frozen=True)
class CompletionResult:
    raw_text: str
    prompt_tokens: int
    completion_tokens: int
    latency_ms: float
    backend_tag: str  # "live" | "replay"

    def __post_init__(self) -> None:
        if not self.raw_text:
            raise UketError("completion returned empty text")
        if self.prompt_tokens < 0 or self.completion_tokens < 0:
            raise UketError("token counts must be >= 0")


@dataclass(frozen=True)
class RateCard:
    """Cost per 1000 tokens, in the account currency."""

    prompt_per_1k: float = 0.06
    completion_per_1k: float = 0.12

    def cost(self, prompt_tokens: int, completion_tokens: int) -> float:
        return (
            prompt_tokens / 1000.0 * self.prompt_per_1k
            + completion_tokens / 1000.0 * self.completion_per_1k
        )


@dataclass(frozen=True)
class GatewayConfig:
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    max_attempts: int = 3
    backoff_base_s: float = 0.5
    timeout_s: float = 120.0
    max_in_flight: int = 4
    spend_cap: float | None = None
    rate_card: RateCard = field(default_factory=RateCard)

    @classmethod
    def from_file(cls, path: str | Path) -> "GatewayConfig":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        rate = raw.pop("rate_card", None)
        if rate is not None:
            raw["rate_card"] = RateCard(**rate)
        return cls(**raw)


@dataclass(frozen=True)
class SpendReport:
    requests: int = 0
    live_calls: int = 0
    replay_hits: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0
    estimated_cost: float = 0.0


class Transport(Protocol):
    """One HTTP round trip: payload in, (status, parsed JSON body) out."""

    def send(self, payload: dict[str, Any]) -> tuple[int, dict[str, Any]]: ...


class HttpTransport:
    """Default transport: POST to a chat-completions endpoint over httpx."""

    def __init__(self, config: GatewayConfig) -> None:
        api_key = os.environ.get(API_KEY_ENV, "")
        if not api_key:
            raise AuthenticationError(f"set {API_KEY_ENV} for live requests")
        self._config = config
        self._client = httpx.Client(
            timeout=config.timeout_s,
            headers={"Authorization": f"Bearer {api_key}"},
        )

    def send(self, payload: dict[str, Any]) -> tuple[int, dict[str, Any]]:
        try:
            response = self._client.post(self._config.endpoint_url, json=payload)
        except httpx.HTTPError as exc:
            # Surface as a retryable transport fault.
            return 599, {"error": {"message": str(exc)}}
        try:
            body = response.json()
        except ValueError:
            body = {"error": {"message": response.text[:500]}}
        return response.status_code, body


class ReplayCache:
    """Directory of responses keyed by request digest.

    Each entry is ``<digest>.txt`` (the raw response text, byte-exact) plus
    a ``<digest>.json`` sidecar with the key fields and token usage.
    Reads are lock-free; writes are serialized and atomic.
    """

    def __init__(self, cache_dir: str | Path) -> None:
        self.root = Path(cache_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()

    def get(self, digest: str) -> CompletionResult | None:
        text_path = self.root / f"{digest}.txt"
        if not text_path.exists():
            return None
        raw_text = text_path.read_text(encoding="utf-8")
        meta_path = self.root / f"{digest}.json"
        meta: dict[str, Any] = {}
        if meta_path.exists():
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return CompletionResult(
            raw_text=raw_text,
            prompt_tokens=int(meta.get("prompt_tokens", 0)),
            completion_tokens=int(meta.get("completion_tokens", 0)),
            latency_ms=0.0,
            backend_tag="replay",
        )

    def put(self, request: ChatRequest, result: CompletionResult) -> None:
        digest = request.digest
        meta = {
            "template_id": request.template_id,
            "version": request.template_version,
            "case_id": request.case_id,
            "model_id": request.model_id,
            "temperature": request.temperature,
            "prompt_tokens": result.prompt_tokens,
            "completion_tokens": result.completion_tokens,
        }
        with self._write_lock:
            self._atomic_write(f"{digest}.txt", result.raw_text)
            self._atomic_write(
                f"{digest}.json",
                json.dumps(meta, indent=2, sort_keys=True) + "\n",
            )

    def _atomic_write(self, name: str, content: str) -> None:
        tmp = self.root / f".{name}.tmp"
        tmp.write_text(content, encoding="utf-8")
        tmp.replace(self.root / name)


class Gateway:
    """Completion dispatcher over one transport and one replay cache."""

    def __init__(
        self,
        config: GatewayConfig | None = None,
        cache: ReplayCache | None = None,
        transport: Transport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.config = config or GatewayConfig()
        self.cache = cache
        self._transport = transport
        self._sleep = sleep
        self._stats_lock = threading.Lock()
        self._in_flight = threading.Semaphore(self.config.max_in_flight)
        self._report = SpendReport()

    def _require_cache(self) -> ReplayCache:
        if self.cache is None:
            raise UketError("no replay cache configured")
        return self.cache

    def _require_transport(self) -> Transport:
        # Built lazily so replay-strict gateways never touch credentials.
        if self._transport is None:
            self._transport = HttpTransport(self.config)
        return self._transport

    def complete(self, request: ChatRequest, mode: str) -> CompletionResult:
        if mode not in MODES:
            raise ValueError(f"unknown mode: {mode}")
        if mode == "replay-strict":
            result = self._require_cache().get(request.digest)
            if result is None:
                raise CacheMissError(request.digest)
            self._account(result)
            return result
        result = self._complete_live(request)
        if mode == "record":
            self._require_cache().put(request, result)
        return result

    def _complete_live(self, request: ChatRequest) -> CompletionResult:
        self._check_budget()
        payload = {
            "model": request.model_id,
            "messages": request.messages(),
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        transport = self._require_transport()
        last_status = 0
        with self._in_flight:
            for attempt in range(self.config.max_attempts):
                if attempt:
                    self._sleep(self.config.backoff_base_s * 2 ** (attempt - 1))
                started = time.perf_counter()
                status, body = transport.send(payload)
                elapsed_ms = (time.perf_counter() - started) * 1000.0
                if status in (401, 403):
                    raise AuthenticationError(f"endpoint rejected credential ({status})")
                if status in TRANSIENT_STATUSES or status == 599:
                    last_status = status
                    logger.warning(
                        "%s: transient %s on attempt %d/%d",
                        request.case_id,
                        status,
                        attempt + 1,
                        self.config.max_attempts,
                    )
                    continue
                if status != 200:
                    raise UketError(f"endpoint error {status}: {body}")
                result = self._parse_response(body, elapsed_ms)
                self._account(result)
                return result
        raise ExhaustedRetriesError(
            f"{request.case_id}: gave up after {self.config.max_attempts} attempts "
            f"(last status {last_status})"
        )

    @staticmethod
    def _parse_response(body: dict[str, Any], latency_ms: float) -> CompletionResult:
        try:
            text = body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise UketError(f"malformed completion response: {body}") from None
        usage = body.get("usage", {})
        return CompletionResult(
            raw_text=text,
            prompt_tokens=int(usage.get("prompt_tokens", 0)),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            latency_ms=latency_ms,
            backend_tag="live",
        )

    def _check_budget(self) -> None:
        cap = self.config.spend_cap
        if cap is not None and self._report.estimated_cost >= cap:
            raise BudgetExceededError(
                f"estimated spend {self._report.estimated_cost:.4f} "
                f"reached the cap {cap:.4f}"
            )

    def _account(self, result: CompletionResult) -> None:
        live = result.backend_tag == "live"
        cost = (
            self.config.rate_card.cost(result.prompt_tokens, result.completion_tokens)
            if live
            else 0.0
        )
        with self._stats_lock:
            r = self._report
            self._report = SpendReport(
                requests=r.requests + 1,
                live_calls=r.live_calls + (1 if live else 0),
                replay_hits=r.replay_hits + (0 if live else 1),
                prompt_tokens=r.prompt_tokens + (result.prompt_tokens if live else 0),
                completion_tokens=r.completion_tokens
                + (result.completion_tokens if live else 0),
                estimated_cost=r.estimated_cost + cost,
            )

    def spend_report(self) -> SpendReport:
        with self._stats_lock:
            return self._report
