"""Deterministic offline provider: scripted chat replies and a hash embedder.

The whole test suite (and any offline demo) runs against this provider. Same
(request, script) always yields the same bytes.
"""

from __future__ import annotations

import hashlib
import math
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from .gateway import TransientProviderError
from .types import ChatRequest, ProviderConfig


@dataclass
class MockRule:
    """One scripted behaviour: when ``matcher`` hits, play ``replies`` in order.

    The last reply repeats once the queue is exhausted. ``reply_fn`` (a pure
    function of the request text) takes precedence over ``replies``.
    ``fail_first`` injects that many transient errors before the first reply;
    ``delay`` sleeps before answering (latency injection for loop tests).
    """

    matcher: str
    replies: list[str] = field(default_factory=list)
    reply_fn: object = None
    regex: bool = False
    fail_first: int = 0
    delay: float = 0.0
    name: str = ""
    _served: int = field(default=0, repr=False)
    _failed: int = field(default=0, repr=False)

    def matches(self, text: str) -> bool:
        if self.regex:
            return re.search(self.matcher, text, re.DOTALL) is not None
        return self.matcher in text

    def next_reply(self, request_text: str) -> str:
        if self._failed < self.fail_first:
            self._failed += 1
            raise TransientProviderError(f"scripted failure {self._failed}/{self.fail_first}")
        if self.reply_fn is not None:
            self._served += 1
            return self.reply_fn(request_text)
        reply = self.replies[min(self._served, len(self.replies) - 1)]
        self._served += 1
        return reply


class MockChatProvider:
    """Scripted chat provider; first matching rule (in order) answers."""

    def __init__(self, rules: list[MockRule] | None = None, default_reply: str | None = None):
        self.rules = list(rules or [])
        self.default_reply = default_reply
        self.calls: list[str] = []  # request text log, in dispatch order
        self._embedder = HashEmbedder()

    def add(self, matcher: str, *replies: str, **kwargs) -> MockRule:
        rule = MockRule(matcher=matcher, replies=list(replies), **kwargs)
        self.rules.append(rule)
        return rule

    def chat(self, req: ChatRequest, cfg: ProviderConfig) -> str:
        text = req.text()
        self.calls.append(text)
        for rule in self.rules:
            if rule.matches(text):
                if rule.delay:
                    time.sleep(rule.delay)
                return rule.next_reply(text)
        if self.default_reply is not None:
            return self.default_reply
        raise TransientProviderError(
            f"no mock rule matched request starting {text[:120]!r}"
        )

    def embed(self, text: str, cfg: ProviderConfig) -> list[float]:
        return self._embedder.embed(text, cfg.embed_dim)

    @classmethod
    def from_directory(cls, path: str | Path, default_reply: str | None = None) -> "MockChatProvider":
        """Load rules from a directory of script files, sorted by filename.

        File format: header lines ``match: <substring>`` (or ``match-re:``),
        optional ``fail: <n>`` and ``delay: <seconds>``, then a blank line and
        the reply body.
        """
        provider = cls(default_reply=default_reply)
        for file in sorted(Path(path).glob("*.txt")):
            header, _, body = file.read_text().partition("\n\n")
            matcher, regex, fail_first, delay = "", False, 0, 0.0
            for line in header.splitlines():
                key, _, value = line.partition(":")
                key, value = key.strip().lower(), value.strip()
                if key == "match":
                    matcher = value
                elif key == "match-re":
                    matcher, regex = value, True
                elif key == "fail":
                    fail_first = int(value)
                elif key == "delay":
                    delay = float(value)
            if not matcher:
                raise ValueError(f"script {file} has no match header")
            provider.rules.append(
                MockRule(
                    matcher=matcher,
                    replies=[body.rstrip("\n")],
                    regex=regex,
                    fail_first=fail_first,
                    delay=delay,
                    name=file.stem,
                )
            )
        return provider


class HashEmbedder:
    """Seeded hash-of-token-n-grams embedding, unit-normalized.

    Each word unigram and bigram is hashed (sha256, keyed by the seed) to a
    bucket and a sign; counts accumulate and the vector is L2-normalized.
    Deterministic across runs and platforms.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed

    def embed(self, text: str, dim: int) -> list[float]:
        grams = self._ngrams(text)
        vec = [0.0] * dim
        for gram in grams:
            digest = hashlib.sha256(f"{self.seed}|{gram}".encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:4], "big") % dim
            sign = 1.0 if digest[4] % 2 == 0 else -1.0
            vec[bucket] += sign
        norm = math.sqrt(sum(v * v for v in vec))
        if norm == 0:
            # pathological all-cancelled case: fall back to a constant basis
            vec[0] = 1.0
            norm = 1.0
        return [v / norm for v in vec]

    @staticmethod
    def _ngrams(text: str) -> list[str]:
        words = re.findall(r"[a-z0-9]+", text.lower())
        return words + [f"{a} {b}" for a, b in zip(words, words[1:])]
