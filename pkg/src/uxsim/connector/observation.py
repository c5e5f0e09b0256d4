"""The structured observation a page turns into: simplified markup plus
element inventories, tab list and last-action error."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .dom import DomDocument, DomNode
from .interactables import Classification, assign_semantic_ids, detect_interactables, extract_js_state, is_clickable, is_hoverable, is_text_input
from .simplify import SimpNode, simplify_dom

KEPT_ATTRS = ("semantic-id", "href", "type", "placeholder", "alt", "role", "title", "aria-label")


@dataclass
class ElementDescriptor:
    semantic_id: str
    tag: str
    visible_text: str
    states: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "semantic_id": self.semantic_id,
            "tag": self.tag,
            "visible_text": self.visible_text,
            "states": self.states,
        }


@dataclass
class TabInfo:
    index: int
    title: str
    url: str
    active: bool

    def to_dict(self) -> dict:
        return {"index": self.index, "title": self.title, "url": self.url, "active": self.active}


@dataclass
class ObservationPayload:
    html: str
    clickable_elements: list[ElementDescriptor] = field(default_factory=list)
    input_elements: list[ElementDescriptor] = field(default_factory=list)
    hoverable_elements: list[ElementDescriptor] = field(default_factory=list)
    select_elements: list[ElementDescriptor] = field(default_factory=list)
    tabs: list[TabInfo] = field(default_factory=list)
    error: str | None = None
    screenshot: bytes | None = None
    target_boxes: dict = field(default_factory=dict)  # semantic id -> (x, y, w, h)

    def to_dict(self) -> dict:
        return {
            "html": self.html,
            "clickable_elements": [e.to_dict() for e in self.clickable_elements],
            "input_elements": [e.to_dict() for e in self.input_elements],
            "hoverable_elements": [e.to_dict() for e in self.hoverable_elements],
            "select_elements": [e.to_dict() for e in self.select_elements],
            "tabs": [t.to_dict() for t in self.tabs],
            "error": self.error,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def all_ids(self) -> set:
        ids = set()
        for bucket in (self.clickable_elements, self.input_elements,
                       self.hoverable_elements, self.select_elements):
            ids.update(e.semantic_id for e in bucket)
        return ids

    def clickable_ids(self) -> set:
        return {e.semantic_id for e in self.clickable_elements}


def observe_document(doc: DomDocument) -> ObservationPayload:
    """Run the full parsing pipeline on one page (no tabs/error context)."""
    doc.refresh()

    def interactive(node: DomNode) -> bool:
        return (is_clickable(node) or is_hoverable(doc, node)
                or is_text_input(node) or node.tag == "select")

    stripped = simplify_dom(doc, interactable=interactive)
    retained = [s.ref for s in stripped.walk() if s.ref.is_element()]
    cls = detect_interactables(doc, retained)
    ordered = cls.all_nodes()
    clickable_ids = {id(n) for n in cls.clickable}
    assignment = assign_semantic_ids(ordered, clickable=clickable_ids)
    states = extract_js_state(doc, ordered)

    def descriptor(node: DomNode) -> ElementDescriptor:
        return ElementDescriptor(
            semantic_id=assignment[node],
            tag=node.tag,
            visible_text=node.subtree_text(),
            states=states.get(node, {}),
        )

    payload = ObservationPayload(
        html=serialize_simplified(stripped),
        clickable_elements=[descriptor(n) for n in cls.clickable],
        input_elements=[descriptor(n) for n in cls.input],
        hoverable_elements=[descriptor(n) for n in cls.hoverable],
        select_elements=[descriptor(n) for n in cls.select],
    )
    payload.target_boxes = {
        assignment[n]: n.box for n in ordered if n.box is not None
    }
    return payload


def serialize_simplified(stripped: SimpNode, indent: int = 0) -> str:
    """Compact nested markup for the simplified tree."""
    node = stripped.ref
    pad = "  " * indent
    if node.tag in ("#document", "body", "html"):
        inner = [serialize_simplified(c, indent) for c in stripped.children]
        return "\n".join(line for line in inner if line)

    attrs = []
    for attr in KEPT_ATTRS:
        if node.attrs.get(attr):
            attrs.append(f'{attr}="{node.attrs[attr]}"')
    attr_text = (" " + " ".join(attrs)) if attrs else ""
    text = node.own_text()

    if not stripped.children:
        if text:
            return f"{pad}<{node.tag}{attr_text}>{text}</{node.tag}>"
        return f"{pad}<{node.tag}{attr_text}/>"

    lines = [f"{pad}<{node.tag}{attr_text}>"]
    if text:
        lines.append(f"{pad}  {text}")
    for child in stripped.children:
        rendered = serialize_simplified(child, indent + 1)
        if rendered:
            lines.append(rendered)
    lines.append(f"{pad}</{node.tag}>")
    return "\n".join(lines)
