"""Observation/execution bridge between an agent and one browser session.

``observe`` runs the DOM pipeline and packages tabs plus the most recent
action error; ``execute`` validates the target, scrolls it into view, performs
the primitive, waits for network/UI quiescence, and returns a fresh
observation. Failed actions never raise out of ``execute``: the failure is
recorded into the next observation's error field, which is what the agent sees.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from ..errors import BrowserGone, NotInteractable, UnknownTarget
from .actions import BrowserAction
from .dom import DomNode
from .interactables import is_clickable
from .observation import ObservationPayload, TabInfo, observe_document

log = logging.getLogger(__name__)


@dataclass
class QuiescencePolicy:
    network_idle_window: float = 0.5
    dom_mutation_idle_window: float = 0.3
    max_wait: float = 10.0
    poll_interval: float = 0.01

    def __post_init__(self):
        if self.max_wait < max(self.network_idle_window, self.dom_mutation_idle_window):
            raise ValueError("max_wait must cover the idle windows")


# fast-settling defaults for the in-process engine
TEST_POLICY = QuiescencePolicy(network_idle_window=0.01, dom_mutation_idle_window=0.01,
                               max_wait=0.5, poll_interval=0.002)


@dataclass
class ExecutionLogEntry:
    action: str
    target: str | None
    started: float
    finished: float
    waited: float
    timed_out: bool
    scrolled_to: float | None = None
    error: str | None = None


class WebConnector:
    """One connector per browser session; all calls on it are serialized."""

    def __init__(self, session, policy: QuiescencePolicy | None = None,
                 screenshot_mode: bool = False):
        self.session = session
        self.policy = policy or QuiescencePolicy()
        self.screenshot_mode = screenshot_mode
        self.pending_error: str | None = None
        self.execution_log: list[ExecutionLogEntry] = []
        self.target_boxes: dict[str, tuple] = {}  # last boxes per executed target
        self.terminated = False

    # -- observation -------------------------------------------------------------

    def observe(self) -> ObservationPayload:
        if self.terminated:
            return ObservationPayload(html="", error="session terminated")
        doc = self.session.document
        payload = observe_document(doc)
        payload.tabs = [TabInfo(*row) for row in self.session.tab_listing()]
        payload.error = self.pending_error
        if self.screenshot_mode:
            payload.screenshot = self.session.screenshot()
        return payload

    # -- execution ----------------------------------------------------------------

    def execute(self, action: BrowserAction) -> ObservationPayload:
        started = time.monotonic()
        scrolled_to = None
        error = None
        try:
            if action.variant == "terminate":
                self.session.close(final_answer=action.final_answer)
                self.terminated = True
                self._log(action, started, 0.0, False, None, None)
                return ObservationPayload(html="", error=None)
            scrolled_to = self._perform(action)
            self.pending_error = None
        except (UnknownTarget, NotInteractable) as exc:
            error = f"{type(exc).__name__}: {exc}"
            self.pending_error = error
        except BrowserGone:
            raise
        waited, timed_out = self._await_quiescence()
        if timed_out:
            note = "Timeout: page did not reach quiescence before max_wait"
            self.pending_error = f"{self.pending_error}; {note}" if self.pending_error else note
        self._log(action, started, waited, timed_out, scrolled_to, error)
        return self.observe()

    def _perform(self, action: BrowserAction) -> float | None:
        s = self.session
        scrolled_to = None
        if action.targets_element():
            node = s.resolve(action.target)
            scrolled_to = s.scroll_into_view(node)
            self.target_boxes[action.target] = node.box
            self._dispatch_element(action, node)
            return scrolled_to

        variant = action.variant
        if variant == "navigate":
            s.navigate(action.url)
        elif variant == "back":
            s.back()
        elif variant == "forward":
            s.forward()
        elif variant == "refresh":
            s.refresh()
        elif variant == "new_tab":
            s.new_tab(action.url)
        elif variant == "switch_tab":
            s.switch_tab(action.tab_index)
        elif variant == "close_tab":
            s.close_tab(action.tab_index)
        elif variant == "key_press":
            s.key_press(action.key)  # no target: goes to the focused element
        else:
            raise ValueError(f"unhandled variant {variant}")
        return scrolled_to

    def _dispatch_element(self, action: BrowserAction, node: DomNode):
        s = self.session
        variant = action.variant
        if variant == "click":
            s.click_node(node)
        elif variant == "hover":
            s.hover_node(node)
        elif variant == "type_text":
            s.set_value(node, action.text)
            if action.press_enter:
                s.key_press("Enter", node)
        elif variant == "clear_input":
            s.set_value(node, "")
        elif variant == "select_option":
            s.select_option(node, action.option)
        elif variant == "key_press":
            s.key_press(action.key, node)
        else:
            raise ValueError(f"unhandled element variant {variant}")

    def _await_quiescence(self) -> tuple[float, bool]:
        """Poll until the session reports no activity for the idle window."""
        policy = self.policy
        window = max(policy.network_idle_window, policy.dom_mutation_idle_window)
        start = time.monotonic()
        idle_since = None
        while True:
            now = time.monotonic()
            if now - start >= policy.max_wait:
                return now - start, True
            if self.session.pending_activity():
                idle_since = None
            else:
                if idle_since is None:
                    idle_since = now
                if now - idle_since >= window:
                    return now - start, False
            time.sleep(policy.poll_interval)

    def _log(self, action, started, waited, timed_out, scrolled_to, error):
        self.execution_log.append(
            ExecutionLogEntry(
                action=action.variant,
                target=action.target,
                started=started,
                finished=time.monotonic(),
                waited=waited,
                timed_out=timed_out,
                scrolled_to=scrolled_to,
                error=error,
            )
        )
