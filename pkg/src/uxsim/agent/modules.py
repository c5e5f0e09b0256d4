"""The agent's reasoning modules: perceive, plan, act, reflect, wonder,
importance scoring, and the survey/interview answerers.

Fast-loop modules (perception, planning, action) keep latency low and lean on
recency-weighted retrieval; slow-loop modules (reflection, wonder, importance)
deliberate over relevance-weighted retrieval. All of them read and write the
shared memory stream and nothing else.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..connector.actions import BrowserAction
from ..errors import InvalidTarget, SchemaViolation
from ..llm.types import ChatRequest, Message
from ..memory import (
    FAST_LOOP_WEIGHTS,
    SLOW_LOOP_WEIGHTS,
    MemoryPiece,
    MemoryStream,
    RetrievalQuery,
    RetrievalWeights,
)
from ..persona import Persona
from .prompts import DISABLED_CAPTURE, PromptCapture, format_memories, render

log = logging.getLogger(__name__)

SYSTEM_PROMPT = "You simulate one specific human participant in a usability study. Stay in character."


@dataclass
class Plan:
    steps: list[str]
    rationale: str
    next_step: int = 0

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a plan needs at least one step")
        if not 0 <= self.next_step < len(self.steps):
            self.next_step = min(max(self.next_step, 0), len(self.steps) - 1)

    def current(self) -> str:
        return self.steps[self.next_step]

    def describe(self) -> str:
        lines = [f"{i + 1}. {'-> ' if i == self.next_step else ''}{s}"
                 for i, s in enumerate(self.steps)]
        return "\n".join(lines) + f"\nRationale: {self.rationale}"


@dataclass
class AgentState:
    persona: Persona
    intent: str
    current_plan: Plan | None = None
    step_clock: int = 0
    status: str = "running"  # running | terminated | failed
    termination_reason: str | None = None

    def finish(self, status: str, reason: str | None = None):
        if self.status == "running":
            self.status = status
            self.termination_reason = reason


@dataclass
class AgentDecision:
    action: BrowserAction
    description: str

    def __post_init__(self):
        if not self.description:
            raise ValueError("decision needs a description")


@dataclass
class AgentModules:
    gateway: object
    stream: MemoryStream
    persona: Persona
    intent: str
    fast_weights: RetrievalWeights = field(default_factory=lambda: FAST_LOOP_WEIGHTS)
    slow_weights: RetrievalWeights = field(default_factory=lambda: SLOW_LOOP_WEIGHTS)
    capture: PromptCapture = field(default_factory=lambda: DISABLED_CAPTURE)
    screenshot_in_prompt: bool = False  # off by default: text-only observations

    # -- retrieval helpers ------------------------------------------------------

    def _embed(self, text: str):
        return self.gateway.embed(text)

    def _retrieve(self, query_text: str, weights: RetrievalWeights, now: int):
        if len(self.stream) == 0:
            return []
        query = RetrievalQuery(query_text, self._embed(query_text), weights, now)
        return self.stream.retrieve(query)

    def _remember(self, kind: str, content: str, source: str, timestamp: int | None,
                  metadata: dict | None = None) -> MemoryPiece:
        piece = MemoryPiece(
            id="", kind=kind, content=content, timestamp=timestamp,
            embedding=self._embed(content), source_module=source,
            metadata=metadata or {},
        )
        self.stream.append(piece)
        return piece

    def _ask(self, module: str, step: int, prompt: str, schema: str | None,
             memories=(), image: bytes | None = None) -> dict | str:
        self.capture.record(module, step, prompt, memories)
        req = ChatRequest(
            messages=[Message("system", SYSTEM_PROMPT), Message("user", prompt)],
            response_schema=schema,
            image=image,
        )
        return self.gateway.complete(req)

    # -- fast loop ---------------------------------------------------------------

    def perceive(self, obs, state: AgentState) -> list[MemoryPiece]:
        """Read the page top to bottom into observation memories."""
        error_note = f"\nThe page reports an error: {obs.error}\n" if obs.error else "\n"
        body = obs.html.strip()
        if not body:
            return [self._remember("observation", "The page appears empty.",
                                   "perception", state.step_clock)]
        image = obs.screenshot if self.screenshot_in_prompt else None
        if image is not None:
            error_note += "A full-page screenshot of this page is attached.\n"
        prompt = render(
            "perceive",
            persona_name=self.persona.name,
            intent=self.intent,
            observation=body,
            error_note=error_note,
        )
        pieces: list[MemoryPiece] = []
        try:
            parsed = self._ask("perceive", state.step_clock, prompt, "observations", image=image)
            notes = [n for n in parsed["observations"] if n.strip()]
        except Exception as exc:
            note = f"I could not take in the page ({exc})."
            if obs.error:
                note = f"Something went wrong: {obs.error}"
            return [self._remember("observation", note, "perception", state.step_clock)]
        if obs.error and not any(obs.error in n for n in notes):
            notes.append(f"Something went wrong with my last action: {obs.error}")
        if not notes:
            notes = ["The page appears empty."]
        for note in notes:
            pieces.append(self._remember("observation", note, "perception", state.step_clock))
        return pieces

    def plan_initial(self, state: AgentState) -> Plan:
        prompt = render(
            "planning",
            persona_name=self.persona.name,
            persona=self.persona.to_sheet(),
            intent=self.intent,
            current_plan="(no plan yet; make your initial plan)",
            memories="(nothing yet)",
        )
        parsed = self._ask("plan", state.step_clock, prompt, "plan")
        plan = Plan(parsed["steps"], parsed["rationale"], parsed["next_step"])
        if len(plan.steps) < 2:
            retry = prompt + "\n\nYour plan must contain at least two steps."
            parsed = self._ask("plan", state.step_clock, retry, "plan")
            plan = Plan(parsed["steps"], parsed["rationale"], parsed["next_step"])
            if len(plan.steps) < 2:
                raise SchemaViolation("initial plan has fewer than two steps")
        state.current_plan = plan
        self._remember("plan", f"My plan: {plan.describe()}", "planning", state.step_clock)
        return plan

    def plan_update(self, state: AgentState) -> Plan:
        memories = self._retrieve(
            f"planning next move toward: {self.intent}", self.fast_weights, state.step_clock
        )
        prompt = render(
            "planning",
            persona_name=self.persona.name,
            persona=self.persona.to_sheet(),
            intent=self.intent,
            current_plan=state.current_plan.describe() if state.current_plan else "(none)",
            memories=format_memories(memories),
        )
        parsed = self._ask("plan", state.step_clock, prompt, "plan", memories)
        plan = Plan(parsed["steps"], parsed["rationale"], parsed["next_step"])
        state.current_plan = plan
        self._remember("plan", f"My plan: {plan.describe()}", "planning", state.step_clock)
        return plan

    def act(self, state: AgentState, obs) -> AgentDecision:
        """One browser action whose target must exist in the observation."""
        memories = self._retrieve(
            f"acting on plan step: {state.current_plan.current() if state.current_plan else self.intent}",
            self.fast_weights, state.step_clock,
        )
        prompt = self._action_prompt(state, obs, memories)
        parsed = self._ask("act", state.step_clock, prompt, "action", memories)
        decision, problem = self._validate_decision(parsed, obs)
        if problem is not None:
            # one corrective re-prompt, then give up and terminate
            retry_prompt = prompt + f"\n\nYour previous choice was invalid: {problem}. Choose again."
            parsed = self._ask("act", state.step_clock, retry_prompt, "action", memories)
            decision, problem = self._validate_decision(parsed, obs)
            if problem is not None:
                log.warning("action invalid twice (%s); terminating session", problem)
                decision = AgentDecision(
                    action=BrowserAction("terminate", final_answer=f"gave up: {problem}"),
                    description=f"Ending the session because I could not pick a valid action ({problem})",
                )
        self._remember("action", decision.description, "action", state.step_clock)
        return decision

    def _action_prompt(self, state: AgentState, obs, memories) -> str:
        error_note = f"\nYour last action failed: {obs.error}\n" if obs.error else "\n"
        return render(
            "action",
            persona_name=self.persona.name,
            intent=self.intent,
            plan_step=state.current_plan.current() if state.current_plan else self.intent,
            clickable=", ".join(sorted(obs.clickable_ids())) or "(none)",
            inputs=", ".join(e.semantic_id for e in obs.input_elements) or "(none)",
            hoverable=", ".join(e.semantic_id for e in obs.hoverable_elements) or "(none)",
            selects=", ".join(e.semantic_id for e in obs.select_elements) or "(none)",
            tabs=", ".join(f"{t.index}:{t.title or t.url}" for t in obs.tabs) or "(one tab)",
            error_note=error_note,
            memories=format_memories(memories),
        )

    @staticmethod
    def _validate_decision(parsed: dict, obs) -> tuple[AgentDecision | None, str | None]:
        try:
            action = BrowserAction.from_dict(parsed)
        except (ValueError, KeyError) as exc:
            return None, str(exc)
        if action.targets_element() and action.target not in obs.all_ids():
            return None, InvalidTarget(f"element {action.target!r} is not on the page").args[0]
        return AgentDecision(action=action, description=parsed["description"]), None

    # -- slow loop ----------------------------------------------------------------

    def reflect(self, state: AgentState) -> MemoryPiece | None:
        if len(self.stream) == 0:
            return None
        memories = self._retrieve(
            f"reflecting on progress toward: {self.intent}",
            self.slow_weights, state.step_clock,
        )
        prompt = render(
            "reflect",
            persona_name=self.persona.name,
            intent=self.intent,
            memories=format_memories(memories),
        )
        try:
            parsed = self._ask("reflect", state.step_clock, prompt, "thought", memories)
        except Exception as exc:
            log.warning("reflection skipped: %s", exc)
            return None
        return self._remember("thought", parsed["thought"], "reflection", None)

    def wonder(self, state: AgentState) -> MemoryPiece | None:
        memories = self._retrieve("recent experiences", self.slow_weights, state.step_clock)
        prompt = render(
            "wonder",
            persona_name=self.persona.name,
            persona=self.persona.to_sheet(),
            memories=format_memories(memories),
        )
        try:
            parsed = self._ask("wonder", state.step_clock, prompt, "thought", memories)
        except Exception as exc:
            log.warning("wonder skipped: %s", exc)
            return None
        return self._remember("thought", parsed["thought"], "wonder", None,
                              metadata={"wonder": True})

    def score_importance_batch(self, state: AgentState, limit: int = 20) -> int:
        """Assign importance to unscored pieces; returns how many were scored."""
        pieces = self.stream.unscored()[:limit]
        if not pieces:
            return 0
        listing = "\n".join(f"- id {p.id}: {p.content}" for p in pieces)
        prompt = render(
            "memory_importance",
            persona_name=self.persona.name,
            intent=self.intent,
            memories=listing,
        )
        try:
            parsed = self._ask("importance", state.step_clock, prompt, "importance_scores", pieces)
        except Exception as exc:
            log.warning("importance scoring skipped: %s", exc)
            return 0
        by_id = {p.id: p for p in pieces}
        scored = 0
        for entry in parsed["scores"]:
            piece = by_id.get(entry["id"])
            if piece is None or piece.importance is not None:
                continue
            value = float(entry["score"])
            if not 0.0 <= value <= 1.0:
                log.warning("importance %s for %s out of range; clamped", value, entry["id"])
                value = min(max(value, 0.0), 1.0)
            self.stream.set_importance(piece.id, value)
            scored += 1
        return scored

    # -- post-study voices -----------------------------------------------------------

    def answer_survey(self, questions: list) -> list[dict]:
        """Answer each survey question in character; validates Likert bounds."""
        trace = format_memories(self.stream.all_pieces())
        answers = []
        for question in questions:
            if question.kind == "likert":
                lo, hi = question.scale
                scale_note = f"Answer with a single integer from {lo} to {hi}.\n"
                answer_format = '{"answer": 3}'
            else:
                scale_note = "Answer in a few honest sentences.\n"
                answer_format = '{"answer": "your answer"}'
            prompt = render(
                "survey",
                persona_name=self.persona.name,
                persona=self.persona.to_sheet(),
                intent=self.intent,
                memories=trace,
                question=question.text,
                scale_note=scale_note,
                answer_format=answer_format,
            )
            schema = "likert_answer" if question.kind == "likert" else "open_answer"
            parsed = self._ask("survey", self.stream.clock, prompt, schema)
            value = parsed["answer"]
            if question.kind == "likert":
                lo, hi = question.scale
                if not lo <= value <= hi:
                    retry = prompt + f"\n\nYour answer must be an integer between {lo} and {hi}."
                    parsed = self._ask("survey", self.stream.clock, retry, schema)
                    value = parsed["answer"]
                    if not lo <= value <= hi:
                        raise SchemaViolation(
                            f"survey answer {value} outside scale {lo}..{hi}", retry_count=1
                        )
            answers.append({"question_id": question.id, "answer": value})
        return answers

    def answer_interview(self, question: str, snapshot, at: int | None = None) -> str:
        """Answer from a time-bounded view of memory; never writes the stream."""
        now = at if at is not None else snapshot.max_timestamp()
        query = RetrievalQuery(question, self._embed(question), self.slow_weights, now)
        memories = snapshot.retrieve(query)
        prompt = render(
            "interview",
            persona_name=self.persona.name,
            persona=self.persona.to_sheet(),
            intent=self.intent,
            memories=format_memories(memories),
            question=question,
        )
        self.capture.record("interview", now, prompt, memories)
        req = ChatRequest(
            messages=[Message("system", SYSTEM_PROMPT), Message("user", prompt)]
        )
        return self.gateway.complete(req)
