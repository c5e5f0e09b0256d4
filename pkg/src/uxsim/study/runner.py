"""End-to-end study orchestration: personas in, persisted run directory out.

Sessions fan out over a bounded thread pool, each with its own browser
session; a session failure is recorded on that agent and never aborts the
run. Records are persisted incrementally so a run can be inspected while
still in flight.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

from ..agent import PromptCapture, SessionConfig, run_session
from ..agent.modules import AgentModules
from ..connector import LocalBrowserSession, QuiescencePolicy, WebConnector
from ..errors import TimestampOutOfRange
from ..memory import MemoryStream
from ..persona import generate_batch
from .aggregate import aggregate
from .config import StudyConfig
from .export import export_rows
from .records import RunStore, SessionRecord, StudyRun, new_run_id

log = logging.getLogger(__name__)


def default_session_factory(config: StudyConfig):
    """A fresh isolated browser session pointed at the study URL."""
    return LocalBrowserSession(start_url=config.url)


class StudyRunner:
    """Runs studies against a store; gateway and browser backends injectable."""

    def __init__(self, store: RunStore, gateway, session_factory=None,
                 capture: PromptCapture | None = None):
        self.store = store
        self.gateway = gateway
        self.session_factory = session_factory or default_session_factory
        self.capture = capture

    def run_study(self, config: StudyConfig, run_id: str | None = None) -> StudyRun:
        run = StudyRun(run_id=run_id or new_run_id(), config=config)
        self.store.create_run(run)
        rng = random.Random(config.rng_seed)
        batch = generate_batch(
            config.demographic_spec, config.example_persona,
            config.n_participants, self.gateway, rng,
        )
        personas_dir = self.store.run_dir(run.run_id) / "personas"
        from ..persona import save_batch

        save_batch(batch, personas_dir)

        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            futures = {
                pool.submit(self._run_one, run.run_id, config, f"a{i + 1:02d}", persona): i
                for i, persona in enumerate(batch.personas)
            }
            for future in as_completed(futures):
                record = future.result()  # _run_one never raises
                run.sessions.append(record)
                self.store.save_manifest(run)
        run.sessions.sort(key=lambda r: r.agent_id)
        run.status = "finished"
        import time as _time

        run.finished = _time.time()
        rows = aggregate(run)
        export_rows(rows, "csv", self.store.run_dir(run.run_id) / "aggregates.csv")
        export_rows(rows, "jsonl", self.store.run_dir(run.run_id) / "aggregates.jsonl")
        self.store.save_manifest(run)
        return run

    def _run_one(self, run_id: str, config: StudyConfig, agent_id: str, persona) -> SessionRecord:
        agent_dir = self.store.agent_dir(run_id, agent_id)
        agent_dir.mkdir(parents=True, exist_ok=True)
        stream_path = agent_dir / "reasoning_trace.jsonl"
        try:
            session = self.session_factory(config)
            policy = QuiescencePolicy(**config.quiescence) if config.quiescence else QuiescencePolicy()
            connector = WebConnector(session, policy=policy,
                                     screenshot_mode=config.screenshot_mode)
            session_config = SessionConfig(
                step_budget=config.step_budget,
                slow_loop_enabled=config.slow_loop_enabled,
                screenshot_mode=config.screenshot_mode,
                screenshot_in_prompt=config.screenshot_in_prompt,
                stream_path=str(stream_path),
                capture=self.capture or PromptCapture(enabled=False),
            )
            result = run_session(persona, config.task, connector, self.gateway, session_config)
            record = SessionRecord(
                agent_id=agent_id,
                persona=persona,
                status=result.status,
                termination_reason=result.termination_reason,
                action_trace=result.action_trace,
                reasoning_trace_path=str(stream_path),
                step_boxes=result.step_boxes,
                final_answer=result.final_answer,
                intent=config.task,
            )
            if result.status == "terminated" and config.survey:
                try:
                    record.survey_answers = result.modules.answer_survey(config.survey)
                except Exception as exc:
                    log.warning("survey failed for %s: %s", agent_id, exc)
            self.store.save_session(run_id, record, screenshots=result.screenshots)
            return record
        except Exception as exc:
            log.exception("session %s failed", agent_id)
            record = SessionRecord(
                agent_id=agent_id, persona=persona, status="failed",
                termination_reason=str(exc), intent=config.task,
                reasoning_trace_path=str(stream_path) if stream_path.exists() else None,
            )
            try:
                self.store.save_session(run_id, record)
            except Exception:
                log.exception("could not persist failed session %s", agent_id)
            return record

    # -- interviews -----------------------------------------------------------------

    def interview(self, run_id: str, agent_id: str, question: str,
                  at_timestamp: int | None = None) -> str:
        """Ask one question of a finished agent, optionally at a past moment."""
        record = self.store.load_session(run_id, agent_id)
        if not record.reasoning_trace_path or not Path(record.reasoning_trace_path).exists():
            stream = MemoryStream()
        else:
            stream = MemoryStream.load(record.reasoning_trace_path)
        max_t = max((p.timestamp for p in stream.all_pieces()), default=0)
        if at_timestamp is not None:
            if at_timestamp > max_t:
                raise TimestampOutOfRange(
                    f"timestamp {at_timestamp} beyond session clock {max_t}"
                )
            snapshot = stream.snapshot_until(at_timestamp)
        else:
            snapshot = stream.snapshot_until(max_t)
        modules = AgentModules(
            gateway=self.gateway, stream=stream, persona=record.persona,
            intent=record.intent or "complete the study task",
            capture=self.capture or PromptCapture(enabled=False),
        )
        answer = modules.answer_interview(question, snapshot, at=at_timestamp)
        entry = {"timestamp": at_timestamp, "question": question, "answer": answer}
        self.store.append_interview(run_id, agent_id, entry)
        return answer
