from .modules import AgentDecision, AgentModules, AgentState, Plan
from .prompts import CapturedPrompt, PromptCapture, format_memories, render
from .session import SessionConfig, SessionResult, run_session

__all__ = [
    "AgentDecision",
    "AgentModules",
    "AgentState",
    "CapturedPrompt",
    "Plan",
    "PromptCapture",
    "SessionConfig",
    "SessionResult",
    "format_memories",
    "render",
    "run_session",
]
