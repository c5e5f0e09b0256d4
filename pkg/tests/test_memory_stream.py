import math
import random

import pytest

from uxsim.errors import AlreadyScored, ClockRegression, NegativeAge, UnknownId
from uxsim.llm import EmbeddingVector
from uxsim.llm.mock import HashEmbedder
from uxsim.memory import (
    FAST_LOOP_WEIGHTS,
    MemoryPiece,
    MemoryStream,
    RetrievalQuery,
    RetrievalWeights,
    recency,
    score,
)

EMBEDDER = HashEmbedder()


def embed(text: str, dim: int = 64) -> EmbeddingVector:
    return EmbeddingVector(EMBEDDER.embed(text, dim))


def piece(content: str, t: int, kind: str = "observation", source: str = "perception",
          importance=None, dim: int = 64) -> MemoryPiece:
    return MemoryPiece(
        id="", kind=kind, content=content, timestamp=t,
        embedding=embed(content, dim), source_module=source, importance=importance,
    )


# -- recency ------------------------------------------------------------------

def test_recency_zero_age_is_exactly_one():
    assert recency(5, 5, 1.0) == 1.0


def test_recency_age_one_matches_exp_minus_one():
    assert recency(4, 5, 1.0) == pytest.approx(0.367879441171442, abs=1e-9)


def test_recency_age_three_matches_exp_minus_three():
    assert recency(2, 5, 1.0) == pytest.approx(math.exp(-3.0), abs=1e-9)


def test_recency_rejects_future_memories():
    with pytest.raises(NegativeAge):
        recency(6, 5, 1.0)


def test_recency_strictly_decreasing_and_bounded():
    values = [recency(0, age, 1.0) for age in range(0, 101)]
    assert values[0] == 1.0
    for earlier, later in zip(values, values[1:]):
        assert 0.0 < later < earlier <= 1.0


# -- score --------------------------------------------------------------------

def unit_axis(dim: int, axis: int = 0) -> EmbeddingVector:
    values = [0.0] * dim
    values[axis] = 1.0
    return EmbeddingVector(values)


def vector_with_cosine(target: float, dim: int = 4) -> EmbeddingVector:
    """A unit vector whose cosine against axis 0 is exactly ``target``."""
    values = [0.0] * dim
    values[0] = target
    values[1] = math.sqrt(1.0 - target * target)
    return EmbeddingVector(values)


def query_for(weights: RetrievalWeights, now: int, dim: int = 4) -> RetrievalQuery:
    return RetrievalQuery("q", unit_axis(dim), weights, now)


def test_score_worked_example():
    # importance 0.8, relevance 0.5, recency 1.0, w = (0.5, 1.0, 0.5) -> 1.4
    w = RetrievalWeights(w_imp=0.5, w_rel=1.0, w_rec=0.5)
    p = MemoryPiece(id="", kind="observation", content="c", timestamp=3,
                    embedding=vector_with_cosine(0.5), source_module="perception",
                    importance=0.8)
    assert score(p, query_for(w, now=3)) == pytest.approx(1.4, abs=1e-9)


def test_score_unset_importance_contributes_zero():
    w = RetrievalWeights(w_imp=0.5, w_rel=1.0, w_rec=0.5)
    p = MemoryPiece(id="", kind="observation", content="c", timestamp=3,
                    embedding=vector_with_cosine(0.5), source_module="perception")
    assert score(p, query_for(w, now=3)) == pytest.approx(1.0, abs=1e-9)


def test_score_zero_type_weight_kills_score():
    w = RetrievalWeights(w_imp=0.5, w_rel=1.0, w_rec=0.5, w_type={"observation": 0.0})
    p = MemoryPiece(id="", kind="observation", content="c", timestamp=3,
                    embedding=vector_with_cosine(0.5), source_module="perception",
                    importance=0.8)
    assert score(p, query_for(w, now=3)) == 0.0


# -- stream basics --------------------------------------------------------------

def test_append_then_retrieve_most_recent_first():
    stream = MemoryStream()
    stream.append(piece("old memory", 0))
    stream.append(piece("fresh memory", 4))
    w = RetrievalWeights(w_imp=0.0, w_rel=0.01, w_rec=100.0, top_k=2)
    got = stream.retrieve(RetrievalQuery("anything", embed("anything"), w, now=4))
    assert got[0].content == "fresh memory"


def test_same_timestamp_tie_broken_by_later_append():
    stream = MemoryStream()
    first = piece("alpha duplicate content", 2)
    second = piece("alpha duplicate content", 2)
    stream.append(first)
    stream.append(second)
    w = RetrievalWeights(w_imp=0.0, w_rel=1.0, w_rec=1.0, top_k=2)
    got = stream.retrieve(RetrievalQuery("alpha duplicate content", embed("alpha duplicate content"), w, now=2))
    assert [p.seq for p in got] == [1, 0]


def test_kind_source_mismatch_rejected():
    with pytest.raises(ValueError):
        piece("a plan from the wrong module", 0, kind="plan", source="action")


def test_clock_regression_rejected():
    stream = MemoryStream()
    stream.append(piece("later", 5))
    with pytest.raises(ClockRegression):
        stream.append(piece("earlier", 4))


def test_retrieve_respects_snapshot_bound():
    stream = MemoryStream()
    stream.append(piece("early", 1))
    stream.append(piece("late", 6))
    w = RetrievalWeights(top_k=10)
    got = stream.retrieve(RetrievalQuery("late", embed("late"), w, now=5))
    assert [p.content for p in got] == ["early"]


def test_empty_stream_retrieves_empty():
    stream = MemoryStream()
    w = RetrievalWeights()
    assert stream.retrieve(RetrievalQuery("q", embed("q"), w, now=0)) == []


# -- importance -----------------------------------------------------------------

def test_set_importance_once_then_visible():
    stream = MemoryStream()
    pid = stream.append(piece("product listing", 0))
    stream.set_importance(pid, 0.7)
    assert stream.get(pid).importance == 0.7
    with pytest.raises(AlreadyScored):
        stream.set_importance(pid, 0.2)


def test_set_importance_range_checked():
    stream = MemoryStream()
    pid = stream.append(piece("x", 0))
    with pytest.raises(ValueError):
        stream.set_importance(pid, 1.2)
    with pytest.raises(UnknownId):
        stream.set_importance("nope", 0.5)


def test_importance_affects_score_after_update():
    stream = MemoryStream()
    pid = stream.append(piece("filter panel", 0))
    w = RetrievalWeights(w_imp=1.0, w_rel=0.0, w_rec=1.0)
    q = RetrievalQuery("filter panel", embed("filter panel"), w, now=0)
    before = score(stream.get(pid), q)
    stream.set_importance(pid, 0.7)
    after = score(stream.get(pid), q)
    assert after == pytest.approx(before + 0.7, abs=1e-9)


# -- snapshots -------------------------------------------------------------------

def test_snapshot_before_first_piece_is_empty():
    stream = MemoryStream()
    stream.append(piece("at one", 1))
    assert len(stream.snapshot_until(0)) == 0


def test_snapshot_at_max_is_everything():
    stream = MemoryStream()
    for t in range(4):
        stream.append(piece(f"piece {t}", t))
    assert len(stream.snapshot_until(3)) == 4


def test_snapshot_membership_matches_filter_oracle():
    rng = random.Random(7)
    stream = MemoryStream()
    stamps = sorted(rng.randint(0, 30) for _ in range(60))
    for i, t in enumerate(stamps):
        stream.append(piece(f"m{i} topic {rng.randint(0, 5)}", t))
    everything = stream.all_pieces()
    for _ in range(25):
        bound = rng.randint(0, 35)
        view_ids = {p.id for p in stream.snapshot_until(bound)}
        oracle_ids = {p.id for p in everything if p.timestamp <= bound}
        assert view_ids == oracle_ids


# -- retrieval vs brute-force oracle ----------------------------------------------

def brute_force_order(pieces, query):
    scored = [(score(p, query), p) for p in pieces if p.timestamp <= query.now]
    scored.sort(key=lambda sp: (-sp[0], -sp[1].timestamp, -sp[1].seq))
    return [p.id for _, p in scored[: query.weights.top_k]]


def test_retrieval_matches_oracle_on_random_streams():
    rng = random.Random(42)
    stream = MemoryStream()
    kinds = [("observation", "perception"), ("plan", "planning"),
             ("action", "action"), ("thought", "reflection")]
    t = 0
    for i in range(200):
        t += rng.choice([0, 0, 1])
        kind, source = rng.choice(kinds)
        imp = round(rng.random(), 3) if rng.random() < 0.5 else None
        stream.append(piece(f"memory {i} about {rng.choice('abcdef')}", t, kind, source, imp))
    for _ in range(20):
        w = RetrievalWeights(
            w_imp=rng.random(), w_rel=rng.random(), w_rec=rng.random() + 0.01,
            k=rng.choice([0.5, 1.0, 2.0]),
            w_type={k: rng.choice([0.0, 0.5, 1.0]) for k, _ in kinds},
            top_k=rng.randint(1, 40),
        )
        q = RetrievalQuery("query " + rng.choice("abcdef"), embed("query " + rng.choice("abcdef")), w, now=rng.randint(0, t))
        got = [p.id for p in stream.retrieve(q)]
        assert got == brute_force_order(stream.all_pieces(), q)


def test_retrieval_is_pure_repeated_calls_identical():
    stream = MemoryStream()
    for i in range(30):
        stream.append(piece(f"repeat check {i}", i // 3))
    q = RetrievalQuery("repeat check", embed("repeat check"), RetrievalWeights(top_k=10), now=9)
    assert [p.id for p in stream.retrieve(q)] == [p.id for p in stream.retrieve(q)]


def test_fast_preset_recency_beats_perfect_relevance():
    # w_rec * (1 - e^{-k*delta}) > w_rel * delta_rel guarantees the newer wins
    stream = MemoryStream()
    dim = 8
    query_vec = unit_axis(dim)
    old = MemoryPiece(id="", kind="observation", content="perfectly relevant but old",
                      timestamp=0, embedding=unit_axis(dim), source_module="perception")
    new = MemoryPiece(id="", kind="observation", content="irrelevant but new",
                      timestamp=5, embedding=unit_axis(dim, axis=1), source_module="perception")
    stream.append(old)
    stream.append(new)
    w = FAST_LOOP_WEIGHTS
    delta, delta_rel = 5, 1.0
    assert w.w_rec * (1 - math.exp(-w.k * delta)) > w.w_rel * delta_rel
    got = stream.retrieve(RetrievalQuery("q", query_vec, w, now=5))
    assert got[0].content == "irrelevant but new"


# -- persistence -------------------------------------------------------------------

def test_jsonl_roundtrip(tmp_path):
    path = tmp_path / "stream.jsonl"
    stream = MemoryStream(path)
    pid = stream.append(piece("saved observation", 0))
    stream.append(piece("saved plan", 1, kind="plan", source="planning"))
    stream.set_importance(pid, 0.4)
    loaded = MemoryStream.load(path)
    assert len(loaded) == 2
    assert loaded.get(pid).importance == 0.4
    assert loaded.get(pid).content == "saved observation"
    assert [p.kind for p in loaded.all_pieces()] == ["observation", "plan"]
