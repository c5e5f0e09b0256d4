"""Which elements can a user click, hover, type into, or select from.

Clickability fires on any of five rules: native controls, anchors with href,
explicit click handlers, ARIA widget roles, or a computed cursor of pointer.
Hoverability comes from the page-instrumentation annotation (the injected
script marks nodes that register hover listeners) or hover-reactive styling.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .dom import DomDocument, DomNode

NATIVE_CLICKABLE_TAGS = {"button", "select", "summary", "textarea"}
CLICKABLE_ROLES = {"button", "link", "menuitem", "tab", "option", "checkbox",
                   "radio", "switch"}
TEXT_INPUT_TYPES = {"", "text", "search", "email", "password", "number", "tel", "url"}

SLUG_MAX_LEN = 40


@dataclass
class Classification:
    clickable: list[DomNode] = field(default_factory=list)
    hoverable: list[DomNode] = field(default_factory=list)
    input: list[DomNode] = field(default_factory=list)
    select: list[DomNode] = field(default_factory=list)
    ordered: list[DomNode] = field(default_factory=list)  # union, document order

    def all_nodes(self) -> list[DomNode]:
        return self.ordered


def is_clickable(node: DomNode) -> bool:
    if node.tag in NATIVE_CLICKABLE_TAGS:
        return True
    if node.tag == "input" and node.attrs.get("type", "").lower() != "hidden":
        return True
    if node.tag == "a" and node.attrs.get("href") is not None:
        return True
    if node.attrs.get("onclick") is not None:
        return True
    if node.attrs.get("data-has-click-listener") == "true":
        return True
    if node.attrs.get("role", "").lower() in CLICKABLE_ROLES:
        return True
    if node.style.get("cursor") == "pointer":
        return True
    return False


def is_hoverable(doc: DomDocument, node: DomNode) -> bool:
    if node.attrs.get("data-maybe-hoverable") == "true":
        return True
    if node.attrs.get("onmouseover") is not None or node.attrs.get("onmouseenter") is not None:
        return True
    return doc.hover_reactive(node)


def is_text_input(node: DomNode) -> bool:
    if node.tag == "textarea":
        return True
    if node.tag == "input" and node.attrs.get("type", "").lower() in TEXT_INPUT_TYPES:
        return True
    return node.attrs.get("contenteditable") == "true"


def detect_interactables(doc: DomDocument, nodes: list[DomNode]) -> Classification:
    """Classify ``nodes`` (document order) into the four interaction lists."""
    cls = Classification()
    for node in nodes:
        hit = False
        if is_clickable(node):
            cls.clickable.append(node)
            hit = True
        if is_hoverable(doc, node):
            cls.hoverable.append(node)
            hit = True
        if is_text_input(node):
            cls.input.append(node)
            hit = True
        if node.tag == "select":
            cls.select.append(node)
            hit = True
        if hit:
            cls.ordered.append(node)
    return cls


# -- semantic ids ----------------------------------------------------------------


def slugify(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_")
    return slug[:SLUG_MAX_LEN].strip("_")


def _label_ancestor_text(node: DomNode) -> str:
    for ancestor in node.ancestors():
        if ancestor.tag == "label" and ancestor.own_text():
            return ancestor.own_text()
    return ""


def _label_source(node: DomNode, labeled: dict) -> str:
    if node.tag == "select":
        # option soup makes a poor label; prefer explicit naming
        for source in (node.attrs.get("aria-label"), _label_ancestor_text(node),
                       node.attrs.get("name")):
            if source:
                return source
    text = node.subtree_text()
    if text:
        return text
    for attr in ("placeholder", "aria-label", "alt", "title", "name", "value"):
        if node.attrs.get(attr):
            return node.attrs[attr]
    for child in node.walk():
        if child.is_element() and child.attrs.get("alt"):
            return child.attrs["alt"]
    # scope hierarchically: borrow the nearest labeled ancestor's slug
    for ancestor in node.ancestors():
        if ancestor in labeled and labeled[ancestor]:
            return f"{labeled[ancestor]} {node.tag}"
    return node.tag


def assign_semantic_ids(nodes: list[DomNode], clickable: set | None = None) -> dict[DomNode, str]:
    """Slug every node, unique within this payload (suffixes 2, 3, ...).

    The assignment is annotated onto the live DOM (``semantic-id`` attribute,
    plus ``clickable="true"`` markers) so actions can resolve targets later;
    the stripped tree shares the same nodes by reference.
    """
    labeled: dict = {}
    counts: dict[str, int] = {}
    assignment: dict[DomNode, str] = {}
    clickable = clickable or set()
    for node in nodes:
        base = slugify(_label_source(node, labeled)) or node.tag
        counts[base] = counts.get(base, 0) + 1
        semantic_id = base if counts[base] == 1 else f"{base}{counts[base]}"
        assignment[node] = semantic_id
        labeled[node] = base
        node.attrs["semantic-id"] = semantic_id
        if id(node) in clickable:
            node.attrs["clickable"] = "true"
    return assignment


def extract_js_state(doc: DomDocument, nodes: list[DomNode]) -> dict[DomNode, dict]:
    """Record live state (values, selections, checkedness, focus) per node."""
    states: dict[DomNode, dict] = {}
    for node in nodes:
        state: dict = {}
        if node.tag == "input" and node.attrs.get("type", "").lower() in ("checkbox", "radio"):
            state["checked"] = bool(node.state.get("checked", "checked" in node.attrs))
        elif is_text_input(node):
            value = node.state.get("value", node.attrs.get("value", ""))
            if value:
                state["value"] = value
        if node.tag == "select":
            chosen = node.state.get("selected")
            if chosen is None:
                for opt in node.elements():
                    if opt.tag == "option" and "selected" in opt.attrs:
                        chosen = opt.subtree_text()
                        break
                else:
                    first = next((o for o in node.elements() if o.tag == "option"), None)
                    chosen = first.subtree_text() if first is not None else None
            if chosen is not None:
                state["selected"] = chosen
        if doc.focused is node:
            state["focused"] = True
        states[node] = state
    return states
