"""Prompt assembly and capture.

Templates live as text assets next to this module; slots are filled with
``string.Template`` substitution. When capture is on (constructor argument or
UXSIM_CAPTURE_PROMPTS=1), every assembled prompt is recorded with the memory
context that went into it, so audits can check exactly what an agent saw.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from string import Template

_PROMPT_DIR = Path(__file__).parent / "prompts"
_cache: dict[str, Template] = {}


def render(name: str, **slots) -> str:
    if name not in _cache:
        _cache[name] = Template((_PROMPT_DIR / f"{name}.txt").read_text())
    return _cache[name].substitute(**slots)


def format_memories(pieces) -> str:
    if not pieces:
        return "(nothing yet)"
    return "\n".join(f"- [{p.kind} @ step {p.timestamp}] {p.content}" for p in pieces)


@dataclass
class CapturedPrompt:
    module: str
    step: int
    text: str
    memory_ids: list[str]
    memory_timestamps: list[int]
    wall_time: float = field(default_factory=time.time)


class PromptCapture:
    """Collects every assembled prompt; optionally persists them as JSON."""

    def __init__(self, directory: str | None = None, enabled: bool | None = None):
        env_dir = os.environ.get("UXSIM_CAPTURE_DIR")
        self.directory = Path(directory or env_dir) if (directory or env_dir) else None
        if enabled is None:
            enabled = bool(directory) or os.environ.get("UXSIM_CAPTURE_PROMPTS") == "1"
        self.enabled = enabled
        self.records: list[CapturedPrompt] = []
        self._lock = threading.Lock()
        self._counter = 0
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)

    def record(self, module: str, step: int, text: str, memories=()) -> None:
        if not self.enabled:
            return
        captured = CapturedPrompt(
            module=module,
            step=step,
            text=text,
            memory_ids=[p.id for p in memories],
            memory_timestamps=[p.timestamp for p in memories],
        )
        with self._lock:
            self.records.append(captured)
            self._counter += 1
            n = self._counter
        if self.directory:
            payload = {
                "module": module,
                "step": step,
                "text": text,
                "memory_ids": captured.memory_ids,
                "memory_timestamps": captured.memory_timestamps,
            }
            (self.directory / f"{n:05d}_{module}.json").write_text(json.dumps(payload, indent=2))

    def by_module(self, module: str) -> list[CapturedPrompt]:
        with self._lock:
            return [r for r in self.records if r.module == module]


DISABLED_CAPTURE = PromptCapture(enabled=False)
