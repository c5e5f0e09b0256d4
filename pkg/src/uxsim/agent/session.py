"""The two-loop scheduler that runs one agent through one browsing session.

The fast loop (perceive, plan, act) drives the browser and never waits on the
slow loop; the slow loop (reflect, wonder, importance scoring) runs in its own
thread on a step cadence and shares nothing with the fast loop except the
memory stream and an atomic status flag. Killing the slow loop entirely leaves
the fast loop fully functional.
"""

from __future__ import annotations

import logging
import threading
import time
from dataclasses import dataclass, field

from ..connector.actions import BrowserAction
from ..errors import BrowserGone
from ..memory import FAST_LOOP_WEIGHTS, SLOW_LOOP_WEIGHTS, MemoryStream, RetrievalWeights
from ..persona import Persona
from .modules import AgentModules, AgentState
from .prompts import DISABLED_CAPTURE, PromptCapture

log = logging.getLogger(__name__)


@dataclass
class SessionConfig:
    step_budget: int = 50
    slow_loop_enabled: bool = True
    slow_loop_cadence: int = 3  # fast-loop iterations between slow passes
    screenshot_mode: bool = False
    screenshot_in_prompt: bool = False
    stream_path: str | None = None
    capture: PromptCapture = field(default_factory=lambda: DISABLED_CAPTURE)
    fast_weights: RetrievalWeights = field(default_factory=lambda: FAST_LOOP_WEIGHTS)
    slow_weights: RetrievalWeights = field(default_factory=lambda: SLOW_LOOP_WEIGHTS)


@dataclass
class SessionResult:
    persona: Persona
    intent: str
    status: str
    termination_reason: str | None
    action_trace: list[dict]
    stream: MemoryStream
    modules: AgentModules
    screenshots: list[bytes] = field(default_factory=list)
    step_boxes: list[tuple | None] = field(default_factory=list)  # per-step target box
    events: list[tuple[float, str, str]] = field(default_factory=list)
    final_answer: str | None = None

    @property
    def total_actions(self) -> int:
        return len(self.action_trace)


def run_session(persona: Persona, intent: str, connector, gateway,
                config: SessionConfig | None = None) -> SessionResult:
    config = config or SessionConfig()
    stream = MemoryStream(config.stream_path)
    state = AgentState(persona=persona, intent=intent)
    modules = AgentModules(
        gateway=gateway, stream=stream, persona=persona, intent=intent,
        fast_weights=config.fast_weights, slow_weights=config.slow_weights,
        capture=config.capture,
        screenshot_in_prompt=config.screenshot_in_prompt and config.screenshot_mode,
    )
    events: list[tuple[float, str, str]] = []
    events_lock = threading.Lock()

    def emit(name: str, detail: str = ""):
        with events_lock:
            events.append((time.monotonic(), name, detail))

    stop = threading.Event()
    slow_thread = None
    if config.slow_loop_enabled:
        slow_thread = threading.Thread(
            target=_slow_loop,
            args=(modules, state, config, stop, emit),
            name="slow-loop",
            daemon=True,
        )

    trace: list[dict] = []
    screenshots: list[bytes] = []
    step_boxes: list[tuple | None] = []
    final_answer = None

    try:
        obs = connector.observe()
        modules.plan_initial(state)
        if slow_thread is not None:
            slow_thread.start()

        for step in range(config.step_budget):
            state.step_clock = step
            modules.perceive(obs, state)
            if step > 0:
                modules.plan_update(state)
            decision = modules.act(state, obs)
            trace.append(decision.action.trace_record(decision.description))
            if config.screenshot_mode and obs.screenshot:
                screenshots.append(obs.screenshot)
            emit("action_executed", decision.action.variant)
            obs = connector.execute(decision.action)
            step_boxes.append(connector.target_boxes.get(decision.action.target))
            if decision.action.variant == "terminate":
                final_answer = decision.action.final_answer
                state.finish("terminated", decision.description)
                break
        else:
            state.finish("failed", f"StepBudgetExceeded: no terminate within {config.step_budget} steps")
    except BrowserGone as exc:
        state.finish("failed", f"browser gone: {exc}")
    except Exception as exc:
        log.exception("session failed")
        state.finish("failed", str(exc))
    finally:
        stop.set()
        if slow_thread is not None:
            slow_thread.join(timeout=30)

    return SessionResult(
        persona=persona,
        intent=intent,
        status=state.status,
        termination_reason=state.termination_reason,
        action_trace=trace,
        stream=stream,
        modules=modules,
        screenshots=screenshots,
        step_boxes=step_boxes,
        events=events,
        final_answer=final_answer,
    )


def _slow_loop(modules: AgentModules, state: AgentState, config: SessionConfig,
               stop: threading.Event, emit):
    """Reflect / wonder / score importance every ``cadence`` fast iterations."""
    last_pass = -config.slow_loop_cadence  # fire once streams have content
    while not stop.is_set():
        steps_done = state.step_clock
        if steps_done - last_pass >= config.slow_loop_cadence and len(modules.stream) > 0:
            last_pass = steps_done
            try:
                emit("reflection_started", str(steps_done))
                piece = modules.reflect(state)
                emit("reflection_done", piece.content if piece else "")
                modules.wonder(state)
                scored = modules.score_importance_batch(state)
                emit("importance_pass", str(scored))
            except Exception as exc:  # isolation: never take down the session
                log.warning("slow loop pass failed: %s", exc)
        else:
            time.sleep(0.004)
