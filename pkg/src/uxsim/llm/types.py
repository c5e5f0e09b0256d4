"""Request/response carriers for chat completion and text embedding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class Message:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass
class ChatRequest:
    """One chat-completion call.

    ``response_schema`` names a registered structured-output schema; when set,
    the gateway validates the reply and re-prompts on malformed output.
    ``image`` optionally carries a page screenshot (PNG bytes) alongside the
    text; providers that cannot use it ignore it.
    """

    messages: list[Message]
    temperature: float = 0.7
    max_output: int = 1024
    response_schema: str | None = None
    image: bytes | None = None

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be non-empty")
        if self.messages[0].role not in ("system", "user"):
            raise ValueError("first message must be system or user")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    @classmethod
    def simple(cls, system: str, user: str, **kwargs) -> "ChatRequest":
        return cls(messages=[Message("system", system), Message("user", user)], **kwargs)

    def text(self) -> str:
        """All message content joined, used by matchers and logs."""
        return "\n".join(m.content for m in self.messages)


class EmbeddingVector:
    """Fixed-length real vector, unit L2 norm after construction."""

    __slots__ = ("values",)

    def __init__(self, values):
        vec = [float(v) for v in values]
        norm = math.sqrt(sum(v * v for v in vec))
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        self.values = [v / norm for v in vec]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, EmbeddingVector) and self.values == other.values

    def cosine(self, other: "EmbeddingVector") -> float:
        """Cosine similarity; both vectors are unit norm so this is the dot product."""
        from ..errors import DimensionMismatch

        if len(self.values) != len(other.values):
            raise DimensionMismatch(
                f"dimension {len(self.values)} vs {len(other.values)}"
            )
        return sum(a * b for a, b in zip(self.values, other.values))


@dataclass
class BackoffPolicy:
    """Exponential backoff with jitter. Base 500 ms, doubling, capped at 30 s."""

    base: float = 0.5
    multiplier: float = 2.0
    cap: float = 30.0
    jitter: float = 0.1

    def delay(self, attempt: int, rng) -> float:
        raw = min(self.base * (self.multiplier**attempt), self.cap)
        return raw * (1.0 + self.jitter * rng.random())


@dataclass
class ProviderConfig:
    endpoint: str = ""
    model_id: str = "default-chat"
    embed_model_id: str = "default-embed"
    api_key: str = ""
    max_retries: int = 2
    backoff: BackoffPolicy = field(default_factory=BackoffPolicy)
    rate_limit: float = 600.0  # requests per minute
    embed_dim: int = 256

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.rate_limit <= 0:
            raise ValueError("rate_limit must be > 0")
