import hashlib
import math

import pytest

from uxsim.errors import ProviderUnavailable, SchemaViolation
from uxsim.llm import (
    ChatRequest,
    EmbeddingVector,
    Gateway,
    Message,
    MockChatProvider,
    ProviderConfig,
)
from uxsim.llm.mock import HashEmbedder, MockRule


def make_gateway(provider, **cfg_kwargs) -> Gateway:
    cfg_kwargs.setdefault("max_retries", 2)
    # no real sleeping in unit tests
    return Gateway(provider, ProviderConfig(**cfg_kwargs), sleep=lambda s: None)


def test_mock_passthrough():
    provider = MockChatProvider(default_reply="OK")
    gw = make_gateway(provider)
    assert gw.complete(ChatRequest.simple("sys", "anything")) == "OK"


def test_rate_limited_twice_then_success_records_retry_count():
    provider = MockChatProvider()
    provider.add("hello", "done", fail_first=2)
    gw = make_gateway(provider)
    assert gw.complete(ChatRequest.simple("sys", "hello")) == "done"
    assert gw.last_retry_count == 2


def test_retries_exhausted_raises_provider_unavailable():
    provider = MockChatProvider()
    provider.add("hello", "done", fail_first=5)
    gw = make_gateway(provider, max_retries=2)
    with pytest.raises(ProviderUnavailable) as err:
        gw.complete(ChatRequest.simple("sys", "hello"))
    assert err.value.retry_count == 2


def test_schema_retry_accepts_second_reply():
    provider = MockChatProvider()
    # first reply omits the required field, second is valid
    provider.add("think", '{"nope": 1}', '{"thought": "fine"}')
    gw = make_gateway(provider)
    req = ChatRequest.simple("sys", "think", response_schema="thought")
    assert gw.complete(req) == {"thought": "fine"}
    assert gw.last_retry_count == 1


def test_schema_violation_after_retries():
    provider = MockChatProvider()
    provider.add("think", "not json at all")
    gw = make_gateway(provider, max_retries=1)
    req = ChatRequest.simple("sys", "think", response_schema="thought")
    with pytest.raises(SchemaViolation):
        gw.complete(req)


def test_reprompt_carries_validation_error_back():
    provider = MockChatProvider()
    provider.add("plan something", '{"oops": true}', '{"steps": ["a"], "rationale": "r", "next_step": 0}')
    gw = make_gateway(provider)
    req = ChatRequest.simple("sys", "plan something", response_schema="plan")
    parsed = gw.complete(req)
    assert parsed["steps"] == ["a"]
    # the second call's request text must include the rejection notice
    assert "rejected" in provider.calls[1]


def test_total_requests_bounded_by_one_plus_max_retries():
    provider = MockChatProvider()
    provider.add("x", "bad", name="never-valid")
    gw = make_gateway(provider, max_retries=3)
    req = ChatRequest.simple("sys", "x", response_schema="thought")
    with pytest.raises(SchemaViolation):
        gw.complete(req)
    assert len(provider.calls) == 4


def test_first_message_role_checked():
    with pytest.raises(ValueError):
        ChatRequest(messages=[Message("assistant", "hi")])
    with pytest.raises(ValueError):
        ChatRequest(messages=[])


def test_embed_deterministic():
    gw = make_gateway(MockChatProvider())
    assert gw.embed("sofa").values == gw.embed("sofa").values


def test_embed_self_similarity():
    gw = make_gateway(MockChatProvider())
    vec = gw.embed("sofa")
    assert vec.cosine(vec) == pytest.approx(1.0, abs=1e-6)


def test_embed_unit_norm():
    gw = make_gateway(MockChatProvider())
    vec = gw.embed("a large inflatable spider decoration")
    norm = math.sqrt(sum(v * v for v in vec.values))
    assert abs(norm - 1.0) <= 1e-6


def hash_embed_oracle(text: str, dim: int, seed: int = 0) -> list:
    """Independent recomputation of the mock embedding formula."""
    import re

    words = re.findall(r"[a-z0-9]+", text.lower())
    grams = words + [f"{a} {b}" for a, b in zip(words, words[1:])]
    vec = [0.0] * dim
    for gram in grams:
        digest = hashlib.sha256(f"{seed}|{gram}".encode("utf-8")).digest()
        vec[int.from_bytes(digest[:4], "big") % dim] += 1.0 if digest[4] % 2 == 0 else -1.0
    norm = math.sqrt(sum(v * v for v in vec))
    return [v / norm for v in vec]


def test_mock_embedder_cosine_matches_oracle():
    dim = 256
    gw = make_gateway(MockChatProvider(), embed_dim=dim)
    a, b = "comfortable blue sofa", "price filter panel"
    got = gw.embed(a).cosine(gw.embed(b))
    ora, orb = hash_embed_oracle(a, dim), hash_embed_oracle(b, dim)
    expected = sum(x * y for x, y in zip(ora, orb))
    assert got == pytest.approx(expected, abs=1e-12)
    assert -1.0 <= got <= 1.0


def test_cosine_range_over_many_pairs():
    gw = make_gateway(MockChatProvider())
    texts = [f"phrase number {i} about shopping" for i in range(12)]
    vecs = [gw.embed(t) for t in texts]
    for i in range(len(vecs)):
        for j in range(len(vecs)):
            assert -1.0 - 1e-9 <= vecs[i].cosine(vecs[j]) <= 1.0 + 1e-9


def test_embedding_dimension_constant():
    gw = make_gateway(MockChatProvider(), embed_dim=64)
    assert len(gw.embed("one")) == len(gw.embed("two words here")) == 64


def test_mock_script_directory(tmp_path):
    (tmp_path / "010__greet.txt").write_text("match: hello\n\nHi there.\n")
    (tmp_path / "020__flaky.txt").write_text("match: flaky\nfail: 1\n\neventually\n")
    provider = MockChatProvider.from_directory(tmp_path)
    gw = make_gateway(provider)
    assert gw.complete(ChatRequest.simple("s", "hello world")) == "Hi there."
    assert gw.complete(ChatRequest.simple("s", "flaky call")) == "eventually"
    assert gw.last_retry_count == 1


def test_mock_determinism_same_script_same_bytes():
    def build():
        p = MockChatProvider([MockRule(matcher="q", replies=["r1", "r2"])])
        g = make_gateway(p)
        return [g.complete(ChatRequest.simple("s", "q")) for _ in range(3)]

    assert build() == build() == ["r1", "r2", "r2"]


def test_embedding_rejects_zero_vector():
    with pytest.raises(ValueError):
        EmbeddingVector([0.0, 0.0])
