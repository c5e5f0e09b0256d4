"""Append-only memory stream with scored retrieval and time-snapshot queries.

Each piece is a timestamped natural-language memory. Retrieval ranks pieces by

    score = (importance * w_imp + relevance * w_rel + recency * w_rec) * w_type

where relevance is cosine similarity to the query embedding and recency decays
exponentially with logical-step age, recency = exp(-k * (now - t)). Pieces
whose importance has not been assigned yet contribute 0 for that term.

The stream is shared by the fast and slow loops; appends, importance updates
and retrievals are serialized by an internal lock so readers always see a
consistent point-in-time view.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AlreadyScored, ClockRegression, NegativeAge, UnknownId
from .llm.types import EmbeddingVector

KINDS = ("observation", "plan", "action", "thought")

# Which module may write which kind of memory.
SOURCE_KINDS = {
    "perception": "observation",
    "planning": "plan",
    "action": "action",
    "reflection": "thought",
    "wonder": "thought",
}


@dataclass
class MemoryPiece:
    id: str
    kind: str
    content: str
    timestamp: int | None  # None: stamp with the stream clock at append time
    embedding: EmbeddingVector
    source_module: str
    importance: float | None = None
    metadata: dict = field(default_factory=dict)
    seq: int = -1  # append order, assigned by the stream

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown memory kind {self.kind!r}")
        if self.timestamp is not None and self.timestamp < 0:
            raise ValueError("timestamp must be a nonnegative logical step")
        expected = SOURCE_KINDS.get(self.source_module)
        if expected is not None and expected != self.kind:
            raise ValueError(
                f"module {self.source_module!r} writes {expected!r} memories, not {self.kind!r}"
            )
        if self.importance is not None and not 0.0 <= self.importance <= 1.0:
            raise ValueError("importance must lie in [0, 1]")


@dataclass
class RetrievalWeights:
    w_imp: float = 0.3
    w_rel: float = 0.5
    w_rec: float = 1.0
    k: float = 1.0
    w_type: dict[str, float] = field(default_factory=dict)
    top_k: int = 10

    def __post_init__(self):
        for w in (self.w_imp, self.w_rel, self.w_rec):
            if w < 0:
                raise ValueError("weights must be nonnegative")
        if self.w_imp == self.w_rel == self.w_rec == 0:
            raise ValueError("at least one of w_imp/w_rel/w_rec must be positive")
        if self.k <= 0:
            raise ValueError("decay rate k must be > 0")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")

    def type_weight(self, kind: str) -> float:
        return self.w_type.get(kind, 1.0)


# Declared defaults: fast loop favors recency, slow loop favors relevance.
FAST_LOOP_WEIGHTS = RetrievalWeights(w_imp=0.3, w_rel=0.5, w_rec=1.0, top_k=10)
SLOW_LOOP_WEIGHTS = RetrievalWeights(w_imp=0.7, w_rel=1.0, w_rec=0.3, top_k=20)


@dataclass
class RetrievalQuery:
    query_text: str
    query_embedding: EmbeddingVector
    weights: RetrievalWeights
    now: int

    def __post_init__(self):
        if self.now < 0:
            raise ValueError("now must be >= 0")


def recency(t: int, now: int, k: float) -> float:
    """Exponential decay of memory age in logical steps: exp(-k * (now - t))."""
    if t > now:
        raise NegativeAge(f"memory timestamp {t} is after now={now}")
    return math.exp(-k * (now - t))


def score(piece: MemoryPiece, query: RetrievalQuery) -> float:
    """Retrieval score of one piece for one query (see module docstring)."""
    w = query.weights
    rel = piece.embedding.cosine(query.query_embedding)
    rec = recency(piece.timestamp, query.now, w.k)
    imp_term = piece.importance * w.w_imp if piece.importance is not None else 0.0
    return (imp_term + rel * w.w_rel + rec * w.w_rec) * w.type_weight(piece.kind)


class MemoryStream:
    """The session's append-only memory store."""

    def __init__(self, path: str | Path | None = None):
        self._pieces: list[MemoryPiece] = []
        self._by_id: dict[str, MemoryPiece] = {}
        self._lock = threading.Lock()
        self._max_timestamp = 0
        self._counter = 0
        self.path = Path(path) if path else None
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)

    def __len__(self) -> int:
        with self._lock:
            return len(self._pieces)

    def new_id(self) -> str:
        with self._lock:
            self._counter += 1
            return f"m{self._counter:05d}"

    def append(self, piece: MemoryPiece) -> str:
        with self._lock:
            if piece.timestamp is None:
                piece.timestamp = self._max_timestamp
            if piece.timestamp < self._max_timestamp:
                raise ClockRegression(
                    f"timestamp {piece.timestamp} precedes stream clock {self._max_timestamp}"
                )
            self._max_timestamp = piece.timestamp
            if not piece.id:
                self._counter += 1
                piece.id = f"m{self._counter:05d}"
            if piece.id in self._by_id:
                raise ValueError(f"duplicate memory id {piece.id}")
            piece.seq = len(self._pieces)
            self._pieces.append(piece)
            self._by_id[piece.id] = piece
            if self.path:
                self._persist_line(piece)
            return piece.id

    def get(self, piece_id: str) -> MemoryPiece:
        with self._lock:
            if piece_id not in self._by_id:
                raise UnknownId(piece_id)
            return self._by_id[piece_id]

    def set_importance(self, piece_id: str, value: float) -> MemoryPiece:
        """Assign the slow loop's importance score; allowed exactly once."""
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"importance {value} out of [0, 1]")
        with self._lock:
            if piece_id not in self._by_id:
                raise UnknownId(piece_id)
            piece = self._by_id[piece_id]
            if piece.importance is not None:
                raise AlreadyScored(piece_id)
            piece.importance = value
            if self.path:
                self._persist_line(piece, update=True)
            return piece

    def unscored(self) -> list[MemoryPiece]:
        with self._lock:
            return [p for p in self._pieces if p.importance is None]

    def retrieve(self, query: RetrievalQuery) -> list[MemoryPiece]:
        """Top-k pieces with timestamp <= query.now, best score first.

        Ties break toward newer timestamps, then later append order.
        """
        with self._lock:
            candidates = [p for p in self._pieces if p.timestamp <= query.now]
        scored = [(score(p, query), p) for p in candidates]
        scored.sort(key=lambda sp: (-sp[0], -sp[1].timestamp, -sp[1].seq))
        return [p for _, p in scored[: query.weights.top_k]]

    def snapshot_until(self, t: int) -> "StreamView":
        """Read-only view of everything with timestamp <= t."""
        if t < 0:
            raise ValueError("snapshot bound must be >= 0")
        with self._lock:
            return StreamView([p for p in self._pieces if p.timestamp <= t])

    def all_pieces(self) -> list[MemoryPiece]:
        with self._lock:
            return list(self._pieces)

    @property
    def clock(self) -> int:
        with self._lock:
            return self._max_timestamp

    # -- persistence (the reasoning-trace artifact) ---------------------------

    def _persist_line(self, piece: MemoryPiece, update: bool = False):
        record = {
            "id": piece.id,
            "kind": piece.kind,
            "content": piece.content,
            "timestamp": piece.timestamp,
            "importance": piece.importance,
            "embedding": piece.embedding.values,
            "source_module": piece.source_module,
            "metadata": piece.metadata,
        }
        if update:
            record["update"] = "importance"
        with self.path.open("a") as fh:
            fh.write(json.dumps(record) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "MemoryStream":
        """Rebuild a stream from its JSONL file (importance updates replayed)."""
        stream = cls()
        for line in Path(path).read_text().splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("update") == "importance":
                piece = stream._by_id.get(rec["id"])
                if piece is not None and piece.importance is None:
                    piece.importance = rec["importance"]
                continue
            stream.append(
                MemoryPiece(
                    id=rec["id"],
                    kind=rec["kind"],
                    content=rec["content"],
                    timestamp=rec["timestamp"],
                    embedding=EmbeddingVector(rec["embedding"]),
                    source_module=rec["source_module"],
                    importance=rec.get("importance"),
                    metadata=rec.get("metadata", {}),
                )
            )
        stream._counter = len(stream._pieces)
        return stream


class StreamView:
    """Immutable slice of a stream, used for snapshot interviews."""

    def __init__(self, pieces: list[MemoryPiece]):
        self._pieces = tuple(pieces)

    def __len__(self) -> int:
        return len(self._pieces)

    def __iter__(self):
        return iter(self._pieces)

    def retrieve(self, query: RetrievalQuery) -> list[MemoryPiece]:
        candidates = [p for p in self._pieces if p.timestamp <= query.now]
        scored = [(score(p, query), p) for p in candidates]
        scored.sort(key=lambda sp: (-sp[0], -sp[1].timestamp, -sp[1].seq))
        return [p for _, p in scored[: query.weights.top_k]]

    def max_timestamp(self) -> int:
        return max((p.timestamp for p in self._pieces), default=0)
