"""Per-agent session records, run manifests, and the on-disk run store.

One directory per run: the config, one subdirectory per agent (persona sheet,
the action trace in the exact three-field schema, the reasoning-trace JSONL,
rich per-step metadata, survey answers, interviews), screenshots as PNG files,
and the aggregate table. Everything is a plain inspectable file.
"""

from __future__ import annotations

import json
import time
import uuid
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..errors import UnknownAgent, UnknownRun
from ..persona import Persona, parse_persona


def _write_atomic(path: Path, text: str):
    """Readers may poll these files mid-run; never let them see a torn write."""
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


@dataclass
class SessionRecord:
    agent_id: str
    persona: Persona
    status: str
    termination_reason: str | None = None
    action_trace: list[dict] = field(default_factory=list)
    reasoning_trace_path: str | None = None
    survey_answers: list[dict] = field(default_factory=list)
    screenshots: list[str] = field(default_factory=list)  # refs like "a01_003.png"
    step_boxes: list = field(default_factory=list)
    interviews: list[dict] = field(default_factory=list)
    final_answer: str | None = None
    intent: str = ""

    @property
    def total_actions(self) -> int:
        return len(self.action_trace)


@dataclass
class StudyRun:
    run_id: str
    config: "object"
    sessions: list[SessionRecord] = field(default_factory=list)
    started: float = field(default_factory=time.time)
    finished: float | None = None
    status: str = "running"  # running | finished

    def session(self, agent_id: str) -> SessionRecord:
        for record in self.sessions:
            if record.agent_id == agent_id:
                return record
        raise UnknownAgent(agent_id)


def new_run_id() -> str:
    return time.strftime("%Y%m%d-%H%M%S-") + uuid.uuid4().hex[:6]


class RunStore:
    """Directory of persisted runs."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def run_dir(self, run_id: str) -> Path:
        return self.root / run_id

    def agent_dir(self, run_id: str, agent_id: str) -> Path:
        return self.run_dir(run_id) / "agents" / agent_id

    def screenshot_dir(self, run_id: str) -> Path:
        return self.run_dir(run_id) / "screenshots"

    # -- writing ----------------------------------------------------------------

    def create_run(self, run: StudyRun):
        run_dir = self.run_dir(run.run_id)
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "agents").mkdir(exist_ok=True)
        self.screenshot_dir(run.run_id).mkdir(exist_ok=True)
        run.config.save(run_dir / "config.json")
        self.save_manifest(run)

    def save_manifest(self, run: StudyRun):
        manifest = {
            "run_id": run.run_id,
            "status": run.status,
            "started": run.started,
            "finished": run.finished,
            "task": run.config.task,
            "url": run.config.url,
            "n_participants": run.config.n_participants,
            "agents": [
                {
                    "agent_id": r.agent_id,
                    "status": r.status,
                    "total_actions": r.total_actions,
                    "persona_summary": r.persona.summary(),
                }
                for r in run.sessions
            ],
        }
        _write_atomic(self.run_dir(run.run_id) / "run.json", json.dumps(manifest, indent=2))

    def save_session(self, run_id: str, record: SessionRecord, screenshots: list[bytes] = ()):
        agent_dir = self.agent_dir(run_id, record.agent_id)
        agent_dir.mkdir(parents=True, exist_ok=True)
        (agent_dir / "persona.txt").write_text(record.persona.to_sheet())
        with (agent_dir / "action_trace.jsonl").open("w") as fh:
            for entry in record.action_trace:
                fh.write(json.dumps(entry) + "\n")
        refs = []
        for i, image in enumerate(screenshots):
            ref = f"{record.agent_id}_{i:03d}.png"
            (self.screenshot_dir(run_id) / ref).write_bytes(image)
            refs.append(ref)
        if refs:
            record.screenshots = refs
        steps = [
            {"index": i, "target_box": list(box) if box else None,
             "screenshot": refs[i] if i < len(refs) else None}
            for i, box in enumerate(record.step_boxes)
        ]
        with (agent_dir / "steps.jsonl").open("w") as fh:
            for step in steps:
                fh.write(json.dumps(step) + "\n")
        _write_atomic(agent_dir / "survey.json", json.dumps(record.survey_answers, indent=2))
        _write_atomic(agent_dir / "interviews.json", json.dumps(record.interviews, indent=2))
        _write_atomic(agent_dir / "status.json", json.dumps({
            "agent_id": record.agent_id,
            "status": record.status,
            "termination_reason": record.termination_reason,
            "final_answer": record.final_answer,
            "intent": record.intent,
            "reasoning_trace": record.reasoning_trace_path,
        }, indent=2))

    def append_interview(self, run_id: str, agent_id: str, entry: dict):
        path = self.agent_dir(run_id, agent_id) / "interviews.json"
        interviews = json.loads(path.read_text()) if path.exists() else []
        interviews.append(entry)
        _write_atomic(path, json.dumps(interviews, indent=2))

    # -- reading -----------------------------------------------------------------

    def list_runs(self) -> list[dict]:
        manifests = []
        for run_dir in sorted(self.root.iterdir()):
            manifest = run_dir / "run.json"
            if manifest.exists():
                manifests.append(json.loads(manifest.read_text()))
        return manifests

    def load_manifest(self, run_id: str) -> dict:
        path = self.run_dir(run_id) / "run.json"
        if not path.exists():
            raise UnknownRun(run_id)
        return json.loads(path.read_text())

    def load_session(self, run_id: str, agent_id: str) -> SessionRecord:
        agent_dir = self.agent_dir(run_id, agent_id)
        if not agent_dir.exists():
            if not self.run_dir(run_id).exists():
                raise UnknownRun(run_id)
            raise UnknownAgent(agent_id)
        status = json.loads((agent_dir / "status.json").read_text())
        trace = [
            json.loads(line)
            for line in (agent_dir / "action_trace.jsonl").read_text().splitlines()
            if line.strip()
        ]
        steps = [
            json.loads(line)
            for line in (agent_dir / "steps.jsonl").read_text().splitlines()
            if line.strip()
        ] if (agent_dir / "steps.jsonl").exists() else []
        survey = json.loads((agent_dir / "survey.json").read_text()) \
            if (agent_dir / "survey.json").exists() else []
        interviews = json.loads((agent_dir / "interviews.json").read_text()) \
            if (agent_dir / "interviews.json").exists() else []
        return SessionRecord(
            agent_id=agent_id,
            persona=parse_persona((agent_dir / "persona.txt").read_text()),
            status=status["status"],
            termination_reason=status.get("termination_reason"),
            action_trace=trace,
            reasoning_trace_path=status.get("reasoning_trace"),
            survey_answers=survey,
            screenshots=[s["screenshot"] for s in steps if s.get("screenshot")],
            step_boxes=[s.get("target_box") for s in steps],
            interviews=interviews,
            final_answer=status.get("final_answer"),
            intent=status.get("intent", ""),
        )

    def load_run(self, run_id: str) -> StudyRun:
        from .config import StudyConfig

        manifest = self.load_manifest(run_id)
        config = StudyConfig.load(self.run_dir(run_id) / "config.json")
        run = StudyRun(
            run_id=run_id,
            config=config,
            started=manifest["started"],
            finished=manifest.get("finished"),
            status=manifest["status"],
        )
        for summary in manifest["agents"]:
            run.sessions.append(self.load_session(run_id, summary["agent_id"]))
        return run

    def screenshot_path(self, ref: str) -> Path:
        for run_dir in self.root.iterdir():
            candidate = run_dir / "screenshots" / ref
            if candidate.exists():
                return candidate
        raise FileNotFoundError(ref)
