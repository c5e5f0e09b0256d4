"""In-process browser session for offline simulation and tests.

Implements the same session surface the protocol-speaking backend exposes
(navigation, tabs, element interaction, screenshots) against pages fetched
over HTTP or from disk, with a deterministic DOM engine instead of a rendering
engine. Form submission, history, hover-reveal styling, focus and input state
behave like a simple static-site browser; JavaScript is not executed.
"""

from __future__ import annotations

import io
import logging
import time
import urllib.parse
import urllib.request
from dataclasses import dataclass, field

from ..errors import BrowserGone, NotInteractable, UnknownTarget
from .dom import VIEWPORT_H, VIEWPORT_W, DomDocument, DomNode, parse_html
from .interactables import is_clickable

log = logging.getLogger(__name__)


@dataclass
class Tab:
    history: list[str] = field(default_factory=list)
    position: int = -1
    document: DomDocument | None = None
    scroll_y: float = 0.0

    @property
    def url(self) -> str:
        return self.history[self.position] if 0 <= self.position < len(self.history) else ""

    @property
    def title(self) -> str:
        return self.document.title if self.document else ""


class LocalBrowserSession:
    """One simulated browser with tabs, history and page state."""

    def __init__(self, start_url: str = "about:blank", fetch=None, latency: float = 0.0):
        self._fetch = fetch or self._default_fetch
        self.latency = latency  # artificial post-action busy window
        self._busy_until = 0.0
        self.tabs: list[Tab] = [Tab()]
        self.active = 0
        self.closed = False
        self.final_answer: str | None = None
        if start_url != "about:blank":
            self.navigate(start_url)

    # -- plumbing -------------------------------------------------------------

    @staticmethod
    def _default_fetch(url: str) -> str:
        with urllib.request.urlopen(url, timeout=10) as resp:
            return resp.read().decode("utf-8", errors="replace")

    def _check_open(self):
        if self.closed:
            raise BrowserGone("session is closed")

    @property
    def tab(self) -> Tab:
        self._check_open()
        return self.tabs[self.active]

    @property
    def document(self) -> DomDocument:
        doc = self.tab.document
        if doc is None:
            raise BrowserGone("no page loaded")
        return doc

    def _load(self, url: str) -> DomDocument:
        if url == "about:blank":
            return parse_html("<html><head><title>blank</title></head><body></body></html>", url=url)
        html = self._fetch(url)
        return parse_html(html, url=url)

    def _begin_activity(self):
        if self.latency:
            self._busy_until = time.monotonic() + self.latency

    def pending_activity(self) -> bool:
        """True while the page still has in-flight work (network or mutations)."""
        return time.monotonic() < self._busy_until

    # -- navigation -----------------------------------------------------------

    def navigate(self, url: str):
        self._check_open()
        tab = self.tabs[self.active]
        url = urllib.parse.urljoin(tab.url or "", url)
        tab.history = tab.history[: tab.position + 1] + [url]
        tab.position += 1
        tab.document = self._load(url)
        tab.scroll_y = 0.0
        self._begin_activity()

    def back(self):
        tab = self.tab
        if tab.position > 0:
            tab.position -= 1
            tab.document = self._load(tab.url)
            self._begin_activity()

    def forward(self):
        tab = self.tab
        if tab.position + 1 < len(tab.history):
            tab.position += 1
            tab.document = self._load(tab.url)
            self._begin_activity()

    def refresh(self):
        tab = self.tab
        if tab.url:
            tab.document = self._load(tab.url)
            self._begin_activity()

    # -- tabs -------------------------------------------------------------------

    def new_tab(self, url: str | None = None):
        self._check_open()
        self.tabs.append(Tab())
        self.active = len(self.tabs) - 1
        if url:
            self.navigate(url)
        else:
            self.tabs[self.active].history = ["about:blank"]
            self.tabs[self.active].position = 0
            self.tabs[self.active].document = self._load("about:blank")

    def switch_tab(self, index: int):
        self._check_open()
        if not 0 <= index < len(self.tabs):
            raise UnknownTarget(f"no tab {index}")
        self.active = index

    def close_tab(self, index: int):
        self._check_open()
        if not 0 <= index < len(self.tabs):
            raise UnknownTarget(f"no tab {index}")
        if len(self.tabs) == 1:
            raise NotInteractable("cannot close the last tab; use terminate")
        del self.tabs[index]
        if self.active >= len(self.tabs):
            self.active = len(self.tabs) - 1

    def tab_listing(self) -> list[tuple[int, str, str, bool]]:
        self._check_open()
        return [
            (i, tab.title, tab.url, i == self.active)
            for i, tab in enumerate(self.tabs)
        ]

    # -- element interaction -------------------------------------------------------

    def resolve(self, semantic_id: str) -> DomNode:
        """Find the live node annotated with ``semantic_id`` at last observe."""
        node = self.document.root.find(semantic_id=semantic_id)
        if node is None:
            raise UnknownTarget(f"unknown element: {semantic_id}")
        return node

    def scroll_into_view(self, node: DomNode) -> float:
        """Adjust scroll so the node's box is inside the viewport; returns new y."""
        tab = self.tab
        if node.box:
            _, y, _, h = node.box
            if y < tab.scroll_y or y + h > tab.scroll_y + VIEWPORT_H:
                tab.scroll_y = max(0.0, y - VIEWPORT_H / 3)
        return tab.scroll_y

    def click_node(self, node: DomNode):
        doc = self.document
        if not is_clickable(node):
            raise NotInteractable(f"element {node.attrs.get('semantic-id')} is not clickable")
        self._begin_activity()
        if node.tag == "a" and node.attrs.get("href"):
            self.navigate(node.attrs["href"])
            return
        if node.tag == "input" and node.attrs.get("type", "").lower() in ("checkbox", "radio"):
            node.state["checked"] = not node.state.get("checked", "checked" in node.attrs)
            doc.refresh()
            return
        if node.tag in ("button", "input") and node.attrs.get("type", "submit").lower() == "submit":
            form = self._enclosing_form(node)
            if form is not None:
                self.submit_form(form)
                return
        if node.tag == "input":
            doc.focused = node
            doc.refresh()
            return
        # onclick location.href shims used by static fixtures
        onclick = node.attrs.get("onclick", "")
        if "location.href" in onclick:
            target = onclick.split("location.href")[1].strip(" ='\";)")
            self.navigate(target)
            return
        data_href = node.attrs.get("data-href")
        if data_href:
            self.navigate(data_href)
            return
        log.debug("click on %s had no page effect", node)

    def hover_node(self, node: DomNode):
        doc = self.document
        doc.hovered = node
        doc.refresh()
        self._begin_activity()

    def focus_node(self, node: DomNode):
        doc = self.document
        doc.focused = node
        doc.refresh()

    def set_value(self, node: DomNode, value: str):
        if node.tag not in ("input", "textarea") and node.attrs.get("contenteditable") != "true":
            raise NotInteractable("element accepts no text input")
        node.state["value"] = value
        self.document.focused = node
        self.document.refresh()
        self._begin_activity()

    def select_option(self, node: DomNode, option_label: str):
        if node.tag != "select":
            raise NotInteractable("element is not a select")
        labels = [o.subtree_text() for o in node.elements() if o.tag == "option"]
        if option_label not in labels:
            raise NotInteractable(f"option {option_label!r} not in {labels}")
        node.state["selected"] = option_label
        self.document.refresh()
        self._begin_activity()

    def key_press(self, key: str, node: DomNode | None = None):
        doc = self.document
        if node is not None:
            doc.focused = node
        target = doc.focused
        if key.lower() == "enter" and target is not None:
            form = self._enclosing_form(target)
            if form is not None:
                self.submit_form(form)
                return
        if key.lower() == "escape":
            doc.focused = None
            doc.hovered = None
            doc.refresh()
        self._begin_activity()

    def _enclosing_form(self, node: DomNode) -> DomNode | None:
        if node.tag == "form":
            return node
        for ancestor in node.ancestors():
            if ancestor.tag == "form":
                return ancestor
        return None

    def submit_form(self, form: DomNode):
        fields = {}
        for node in form.elements():
            name = node.attrs.get("name")
            if not name:
                continue
            if node.tag == "input":
                itype = node.attrs.get("type", "text").lower()
                if itype in ("checkbox", "radio") and not node.state.get("checked", "checked" in node.attrs):
                    continue
                fields[name] = node.state.get("value", node.attrs.get("value", ""))
            elif node.tag == "textarea":
                fields[name] = node.state.get("value", "")
            elif node.tag == "select":
                chosen = node.state.get("selected")
                if chosen is None:
                    first = next((o for o in node.elements() if o.tag == "option"), None)
                    chosen = first.subtree_text() if first is not None else ""
                fields[name] = chosen
        action = form.attrs.get("action") or self.tab.url
        query = urllib.parse.urlencode(fields)
        url = f"{action}?{query}" if query else action
        self.navigate(url)

    # -- output ----------------------------------------------------------------

    def screenshot(self) -> bytes:
        """Paint a simple full-page raster of the visible boxes and text."""
        from PIL import Image, ImageDraw

        doc = self.document
        height = max(int(doc.doc_height) + 40, VIEWPORT_H)
        img = Image.new("RGB", (VIEWPORT_W, min(height, 8000)), "white")
        draw = ImageDraw.Draw(img)
        for node in doc.root.elements():
            if node.box is None or node.style.get("display") == "none":
                continue
            x, y, w, h = node.box
            if w <= 0 or h <= 0 or y > img.height:
                continue
            if node.tag in ("button", "input", "select", "textarea"):
                draw.rectangle([x, y, min(x + w, img.width - 1), y + h], outline=(120, 120, 120))
            text = node.own_text()
            if text:
                color = (20, 60, 200) if node.tag == "a" else (30, 30, 30)
                draw.text((x + 2, y + 2), text[:90], fill=color)
        buf = io.BytesIO()
        img.save(buf, format="PNG")
        return buf.getvalue()

    def close(self, final_answer: str | None = None):
        self.final_answer = final_answer
        self.closed = True
