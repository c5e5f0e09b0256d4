"""Reduce a page to the elements a user can actually see and use.

Three passes over the parsed DOM:
  1. discard invisible content (scripts/styles/metadata, CSS-hidden nodes,
     explicit zero-size nodes, nodes positioned entirely off the page),
  2. collapse chains of non-semantic single-child wrappers,
  3. prune elements that render empty, keeping controls that legitimately
     appear empty (inputs, images, ...) and anything interactable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .dom import VIEWPORT_W, DomDocument, DomNode, px

log = logging.getLogger(__name__)

DISCARD_TAGS = {"script", "style", "meta", "link", "head", "title",
                "noscript", "template", "base"}

# may legitimately appear empty
EMPTY_OK_TAGS = {"input", "img", "textarea", "select", "br", "hr", "canvas",
                 "video", "audio", "progress", "meter", "iframe", "option"}

WRAPPER_TAGS = {"div", "span"}

# attributes that make a wrapper semantically meaningful in its own right
SEMANTIC_ATTRS = ("role", "onclick", "aria-label", "title", "data-has-click-listener",
                  "data-maybe-hoverable", "onmouseover", "onmouseenter")


@dataclass
class SimpNode:
    """Stripped-tree node; ``ref`` points back at the live DOM node."""

    ref: DomNode
    children: list = field(default_factory=list)

    @property
    def tag(self) -> str:
        return self.ref.tag

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


def is_discarded(node: DomNode) -> bool:
    """True when the node (and so its subtree) is invisible to a user."""
    if node.tag in DISCARD_TAGS:
        return True
    style = node.style
    if style.get("display") == "none":
        return True
    if style.get("visibility") in ("hidden", "collapse"):
        return True
    if node.tag == "input" and node.attrs.get("type", "").lower() == "hidden":
        return True
    if px(style.get("width")) == 0.0 or px(style.get("height")) == 0.0:
        return True
    if style.get("position") in ("absolute", "fixed") and node.box is not None:
        x, y, w, h = node.box
        if x + w <= 0 or y + h <= 0 or x >= VIEWPORT_W:
            return True
    return False


def simplify_dom(doc: DomDocument, interactable=None) -> SimpNode:
    """Build the stripped tree for ``doc``.

    ``interactable`` is an optional predicate marking nodes that must survive
    collapsing and pruning no matter how bare they look.
    """
    interactable = interactable or (lambda node: False)
    body = next((n for n in doc.root.elements() if n.tag == "body"), doc.root)
    stripped = _strip(body)
    if stripped is None:
        stripped = SimpNode(body)
    _collapse(stripped, interactable)
    _prune(stripped, interactable)
    return stripped


def _strip(node: DomNode) -> SimpNode | None:
    if node.is_element() and is_discarded(node):
        return None
    simp = SimpNode(node)
    for child in node.children:
        if child.is_text():
            continue  # text rides along via ref.own_text()
        kept = _strip(child)
        if kept is not None:
            simp.children.append(kept)
    return simp


def _is_trivial_wrapper(simp: SimpNode, interactable) -> bool:
    node = simp.ref
    if node.tag not in WRAPPER_TAGS:
        return False
    if interactable(node):
        return False
    if any(node.attrs.get(a) is not None for a in SEMANTIC_ATTRS):
        return False
    if node.own_text():
        return False
    return len(simp.children) <= 1


def _collapse(simp: SimpNode, interactable):
    """Hoist single-child non-semantic wrappers out of the tree."""
    new_children = []
    for child in simp.children:
        _collapse(child, interactable)
        if _is_trivial_wrapper(child, interactable):
            new_children.extend(child.children)
        else:
            new_children.append(child)
    simp.children = new_children


def _prune(simp: SimpNode, interactable) -> bool:
    """Drop empty leaves; returns True when ``simp`` itself should be kept."""
    simp.children = [c for c in simp.children if _prune(c, interactable)]
    node = simp.ref
    if simp.children:
        return True
    if node.tag in EMPTY_OK_TAGS or interactable(node):
        return True
    if node.own_text():
        return True
    if node.attrs.get("aria-label") or node.attrs.get("alt") or node.attrs.get("title"):
        return True
    return False
