"""Uniform access to chat completion and embedding with retry and rate limiting.

Many agent sessions share one gateway; a per-provider rate limiter serializes
dispatch, and transient provider failures are retried with exponential
backoff. Structured replies are validated and re-prompted on violation.
"""

from __future__ import annotations

import logging
import random
import threading
import time

from ..errors import ProviderUnavailable, SchemaViolation
from . import schemas
from .types import ChatRequest, EmbeddingVector, Message, ProviderConfig

log = logging.getLogger(__name__)


class TransientProviderError(Exception):
    """Raised by providers for failures worth retrying (rate limit, 5xx)."""


class RateLimiter:
    """Serializes dispatch so at most ``per_minute`` requests start per minute."""

    def __init__(self, per_minute: float):
        self._interval = 60.0 / per_minute
        self._lock = threading.Lock()
        self._next_free = 0.0

    def acquire(self):
        with self._lock:
            now = time.monotonic()
            start = max(now, self._next_free)
            self._next_free = start + self._interval
            wait = start - now
        if wait > 0:
            time.sleep(wait)


class Gateway:
    """Front door for all LLM traffic.

    ``provider`` is any object with ``chat(req, cfg) -> str`` and
    ``embed(text, cfg) -> list[float]``; see mock.py and http_provider.py.
    """

    def __init__(self, provider, cfg: ProviderConfig | None = None, sleep=time.sleep):
        self.provider = provider
        self.cfg = cfg or ProviderConfig()
        self._limiter = RateLimiter(self.cfg.rate_limit)
        self._sleep = sleep
        self._rng = random.Random(0)
        self.last_retry_count = 0

    # -- chat ---------------------------------------------------------------

    def complete(self, req: ChatRequest, cfg: ProviderConfig | None = None):
        """Run one chat completion.

        Returns the raw reply text, or the parsed record when
        ``req.response_schema`` is set. Retries transient provider failures
        and malformed structured replies up to ``max_retries`` extra calls.
        """
        cfg = cfg or self.cfg
        attempts = 1 + cfg.max_retries
        retry_count = 0
        current = req
        last_error: Exception | None = None
        for attempt in range(attempts):
            self._limiter.acquire()
            try:
                raw = self.provider.chat(current, cfg)
            except TransientProviderError as exc:
                last_error = exc
                retry_count = min(attempt + 1, cfg.max_retries)
                if attempt + 1 < attempts:
                    self._sleep(cfg.backoff.delay(attempt, self._rng))
                continue
            if req.response_schema is None:
                self.last_retry_count = attempt
                return raw
            try:
                parsed = schemas.validate(req.response_schema, raw)
            except ValueError as exc:
                last_error = SchemaViolation(str(exc), retry_count=attempt, last_output=raw)
                retry_count = min(attempt + 1, cfg.max_retries)
                current = self._reprompt(req, raw, str(exc))
                continue
            self.last_retry_count = attempt
            return parsed
        if isinstance(last_error, SchemaViolation):
            raise SchemaViolation(
                f"no valid structured reply after {retry_count} retries: {last_error}",
                retry_count=retry_count,
                last_output=last_error.last_output,
            )
        raise ProviderUnavailable(
            f"provider failed after {retry_count} retries: {last_error}",
            retry_count=retry_count,
        )

    @staticmethod
    def _reprompt(req: ChatRequest, bad_reply: str, error: str) -> ChatRequest:
        extra = [
            Message("assistant", bad_reply),
            Message(
                "user",
                "Your previous reply was rejected: "
                f"{error}\nAnswer again with only the requested JSON object.",
            ),
        ]
        return ChatRequest(
            messages=list(req.messages) + extra,
            temperature=req.temperature,
            max_output=req.max_output,
            response_schema=req.response_schema,
            image=req.image,
        )

    # -- embeddings ----------------------------------------------------------

    def embed(self, text: str, cfg: ProviderConfig | None = None) -> EmbeddingVector:
        """Embed ``text``; deterministic per provider, unit-normalized."""
        if not text:
            raise ValueError("cannot embed empty text")
        cfg = cfg or self.cfg
        attempts = 1 + cfg.max_retries
        last_error: Exception | None = None
        for attempt in range(attempts):
            self._limiter.acquire()
            try:
                values = self.provider.embed(text, cfg)
                return EmbeddingVector(values)
            except TransientProviderError as exc:
                last_error = exc
                if attempt + 1 < attempts:
                    self._sleep(cfg.backoff.delay(attempt, self._rng))
        raise ProviderUnavailable(f"embedding failed: {last_error}", retry_count=attempts - 1)
