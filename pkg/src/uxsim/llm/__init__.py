from .gateway import Gateway, RateLimiter, TransientProviderError
from .http_provider import HttpProvider
from .mock import HashEmbedder, MockChatProvider, MockRule
from .types import BackoffPolicy, ChatRequest, EmbeddingVector, Message, ProviderConfig

__all__ = [
    "BackoffPolicy",
    "ChatRequest",
    "EmbeddingVector",
    "Gateway",
    "HashEmbedder",
    "HttpProvider",
    "Message",
    "MockChatProvider",
    "MockRule",
    "ProviderConfig",
    "RateLimiter",
    "TransientProviderError",
]
