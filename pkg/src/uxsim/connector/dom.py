"""In-memory DOM with computed styles and naive layout geometry.

Pages are parsed with the stdlib HTML parser into DomNode trees. A small CSS
engine resolves the handful of properties the simplifier cares about (display,
visibility, cursor, position, sizes) from UA defaults, <style> sheets and
inline styles, including :hover rules. A single-pass flow layout assigns every
node an approximate bounding box so off-screen pruning, scroll-into-view and
screenshot highlights have real coordinates to work with.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

log = logging.getLogger(__name__)

VIEWPORT_W = 1280
VIEWPORT_H = 720
LINE_H = 20
CHAR_W = 8

VOID_TAGS = {"area", "base", "br", "col", "embed", "hr", "img", "input",
             "link", "meta", "param", "source", "track", "wbr"}

BLOCK_TAGS = {"html", "body", "div", "p", "h1", "h2", "h3", "h4", "h5", "h6",
              "ul", "ol", "li", "table", "tr", "td", "th", "form", "header",
              "footer", "nav", "main", "section", "article", "aside", "fieldset",
              "figure", "figcaption", "details", "summary", "pre", "blockquote",
              "dl", "dt", "dd", "hr", "textarea"}

# content that never renders
INVISIBLE_TAGS = {"script", "style", "meta", "link", "head", "title",
                  "noscript", "template", "base"}

INLINE_TEXT_TAGS = {"a", "span", "b", "i", "em", "strong", "small", "label",
                    "code", "u", "s", "sub", "sup", "abbr", "cite", "q", "time",
                    "mark"}


class DomNode:
    __slots__ = ("tag", "attrs", "children", "parent", "text", "style", "box",
                 "state", "doc")

    def __init__(self, tag: str, attrs: dict | None = None, parent=None, text: str = ""):
        self.tag = tag
        self.attrs = attrs or {}
        self.children: list[DomNode] = []
        self.parent = parent
        self.text = text            # only for "#text" nodes
        self.style: dict = {}       # computed style, filled by resolve_styles
        self.box: tuple | None = None  # (x, y, w, h) after layout
        self.state: dict = {}       # live JS-ish state: value, checked, selected, focused
        self.doc = None

    def is_text(self) -> bool:
        return self.tag == "#text"

    def is_element(self) -> bool:
        return not self.is_text()

    def append(self, child: "DomNode"):
        child.parent = self
        self.children.append(child)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def elements(self):
        for node in self.walk():
            if node.is_element():
                yield node

    def own_text(self) -> str:
        """Text from direct child text nodes, whitespace-normalized."""
        return _norm(" ".join(c.text for c in self.children if c.is_text()))

    def subtree_text(self) -> str:
        """All visible text beneath this node (hidden subtrees excluded)."""
        parts: list[str] = []
        self._collect_text(parts)
        return _norm(" ".join(parts))

    def _collect_text(self, parts: list):
        for child in self.children:
            if child.is_text():
                parts.append(child.text)
            elif child.style.get("display") != "none" and \
                    child.style.get("visibility") not in ("hidden", "collapse"):
                child._collect_text(parts)

    def classes(self) -> set:
        return set(self.attrs.get("class", "").split())

    def ancestors(self):
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def find(self, **attr_filters) -> "DomNode | None":
        for node in self.elements():
            if all(node.attrs.get(k.replace("_", "-")) == v for k, v in attr_filters.items()):
                return node
        return None

    def __repr__(self):
        if self.is_text():
            return f"#text({self.text[:30]!r})"
        ident = self.attrs.get("id", "")
        return f"<{self.tag}{'#' + ident if ident else ''} children={len(self.children)}>"


def _norm(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = DomNode("#document")
        self.stack = [self.root]
        self.errors: list[str] = []

    def handle_starttag(self, tag, attrs):
        node = DomNode(tag, {k: (v if v is not None else "") for k, v in attrs})
        self.stack[-1].append(node)
        if tag not in VOID_TAGS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        self.stack[-1].append(DomNode(tag, {k: (v if v is not None else "") for k, v in attrs}))

    def handle_endtag(self, tag):
        # close the nearest matching open element; tolerate stray end tags
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return
        self.errors.append(f"stray </{tag}>")

    def handle_data(self, data):
        if data.strip():
            self.stack[-1].append(DomNode("#text", text=data))


@dataclass
class CssRule:
    selector: "CompoundChain"
    props: dict
    specificity: tuple
    order: int


@dataclass
class Compound:
    tag: str | None = None
    id_: str | None = None
    classes: tuple = ()
    hover: bool = False

    def matches(self, node: DomNode, hovered: DomNode | None) -> bool:
        if self.tag and node.tag != self.tag:
            return False
        if self.id_ and node.attrs.get("id") != self.id_:
            return False
        if self.classes and not set(self.classes) <= node.classes():
            return False
        if self.hover and not _in_hover_chain(node, hovered):
            return False
        return True


def _in_hover_chain(node: DomNode, hovered: DomNode | None) -> bool:
    if hovered is None:
        return False
    return node is hovered or node in list(hovered.ancestors())


@dataclass
class CompoundChain:
    """Descendant-combinator chain, matched right to left."""

    parts: list

    def matches(self, node: DomNode, hovered: DomNode | None) -> bool:
        if not self.parts[-1].matches(node, hovered):
            return False
        remaining = self.parts[:-1]
        current = node.parent
        for part in reversed(remaining):
            while current is not None and not part.matches(current, hovered):
                current = current.parent
            if current is None:
                return False
            current = current.parent
        return True

    def mentions_hover(self) -> bool:
        return any(p.hover for p in self.parts)


_COMPOUND_RE = re.compile(
    r"^(?P<tag>[a-zA-Z][a-zA-Z0-9]*|\*)?(?P<rest>(?:[#.][\w-]+|:hover)*)$"
)


def parse_compound(token: str) -> Compound | None:
    m = _COMPOUND_RE.match(token)
    if not m or (not m.group("tag") and not m.group("rest")):
        return None
    comp = Compound()
    tag = m.group("tag")
    if tag and tag != "*":
        comp.tag = tag.lower()
    classes = []
    for piece in re.findall(r"[#.][\w-]+|:hover", m.group("rest") or ""):
        if piece == ":hover":
            comp.hover = True
        elif piece.startswith("#"):
            comp.id_ = piece[1:]
        else:
            classes.append(piece[1:])
    comp.classes = tuple(classes)
    return comp


def parse_stylesheet(css: str, start_order: int = 0) -> list[CssRule]:
    rules: list[CssRule] = []
    css = re.sub(r"/\*.*?\*/", "", css, flags=re.DOTALL)
    order = start_order
    for block in css.split("}"):
        if "{" not in block:
            continue
        sel_text, _, decl_text = block.partition("{")
        props = parse_declarations(decl_text)
        if not props:
            continue
        for sel in sel_text.split(","):
            parts = [parse_compound(tok) for tok in sel.split()]
            if not parts or any(p is None for p in parts):
                continue  # unsupported selector form: skip, never crash
            chain = CompoundChain(parts)
            ids = sum(1 for p in parts if p.id_)
            classes = sum(len(p.classes) + (1 if p.hover else 0) for p in parts)
            tags = sum(1 for p in parts if p.tag)
            rules.append(CssRule(chain, props, (ids, classes, tags), order))
            order += 1
    return rules


def parse_declarations(text: str) -> dict:
    props = {}
    for decl in text.split(";"):
        name, _, value = decl.partition(":")
        if _ and name.strip():
            props[name.strip().lower()] = value.strip().lower()
    return props


def px(value: str | None, percent_base: float | None = None):
    """Parse a CSS length; returns float pixels or None."""
    if not value or value in ("auto", "inherit", "initial"):
        return None
    value = value.strip().lower()
    if value.endswith("px"):
        value = value[:-2]
    elif value.endswith("%"):
        if percent_base is None:
            return None
        try:
            return float(value[:-1]) / 100.0 * percent_base
        except ValueError:
            return None
    try:
        return float(value)
    except ValueError:
        return None


class DomDocument:
    """One parsed page: tree, stylesheet, computed styles, layout, state."""

    def __init__(self, html: str, url: str = ""):
        builder = _TreeBuilder()
        try:
            builder.feed(html)
            builder.close()
        except Exception as exc:  # best-effort parse of malformed markup
            builder.errors.append(str(exc))
        self.root = builder.root
        self.parse_errors = builder.errors
        self.url = url
        self.hovered: DomNode | None = None
        self.focused: DomNode | None = None
        self.rules = self._collect_rules()
        self.doc_height = 0.0
        for node in self.root.walk():
            node.doc = self
        self.refresh()

    def _collect_rules(self) -> list[CssRule]:
        rules: list[CssRule] = []
        for node in self.root.elements():
            if node.tag == "style":
                css = " ".join(c.text for c in node.children if c.is_text())
                rules.extend(parse_stylesheet(css, start_order=len(rules)))
        return rules

    @property
    def title(self) -> str:
        for node in self.root.elements():
            if node.tag == "title":
                return node.subtree_text()
        return ""

    def refresh(self):
        """Recompute styles and layout (call after hover/state changes)."""
        self.resolve_styles()
        self.layout()

    # -- styles ---------------------------------------------------------------

    def resolve_styles(self):
        for node in self.root.elements():
            node.style = self._computed_style(node)

    def _computed_style(self, node: DomNode) -> dict:
        style: dict = {"display": self._default_display(node)}
        # only cursor and visibility inherit here
        if node.parent is not None and node.parent.style:
            for prop in ("cursor", "visibility"):
                if prop in node.parent.style:
                    style[prop] = node.parent.style[prop]
        matched = [r for r in self.rules if r.selector.matches(node, self.hovered)]
        matched.sort(key=lambda r: (r.specificity, r.order))
        for rule in matched:
            style.update(rule.props)
        style.update(parse_declarations(node.attrs.get("style", "")))
        return style

    @staticmethod
    def _default_display(node: DomNode) -> str:
        if node.tag in INVISIBLE_TAGS:
            return "none"
        if node.attrs.get("type", "").lower() == "hidden" and node.tag == "input":
            return "none"
        if node.attrs.get("hidden") is not None and "hidden" in node.attrs:
            return "none"
        return "block" if node.tag in BLOCK_TAGS else "inline"

    def hover_reactive(self, node: DomNode) -> bool:
        """True when hovering this node triggers some :hover rule.

        The reacting node is the one the :hover pseudo is attached to, e.g.
        for ``.menu:hover .dropdown`` it is the ``.menu`` element.
        """
        for rule in self.rules:
            if not rule.selector.mentions_hover():
                continue
            last_hover = max(i for i, p in enumerate(rule.selector.parts) if p.hover)
            prefix = [
                Compound(tag=p.tag, id_=p.id_, classes=p.classes, hover=False)
                for p in rule.selector.parts[: last_hover + 1]
            ]
            if CompoundChain(prefix).matches(node, None):
                return True
        return False

    # -- layout ---------------------------------------------------------------

    def layout(self):
        body = next((n for n in self.root.elements() if n.tag == "body"), self.root)
        self.doc_height = self._layout_node(body, 0.0, 0.0, float(VIEWPORT_W))
        for node in self.root.elements():
            if node.box is None:
                node.box = (0.0, 0.0, 0.0, 0.0)

    def _layout_node(self, node: DomNode, x: float, y: float, avail_w: float) -> float:
        """Assign node.box; return the flow height consumed."""
        style = node.style
        if style.get("display") == "none":
            for n in node.walk():
                n.box = (0.0, 0.0, 0.0, 0.0)
            return 0.0

        position = style.get("position", "static")
        left = px(style.get("left")) or 0.0
        top = px(style.get("top")) or 0.0
        width = px(style.get("width"), percent_base=avail_w)
        height = px(style.get("height"))

        if position in ("absolute", "fixed"):
            ax, ay = left, top
            w = width if width is not None else self._intrinsic_w(node, avail_w)
            content_h = self._layout_children(node, ax, ay, w)
            h = height if height is not None else content_h
            node.box = (ax, ay, w, h)
            return 0.0

        if node.tag in ("img",):
            w = width if width is not None else px(node.attrs.get("width")) or 50.0
            h = height if height is not None else px(node.attrs.get("height")) or 50.0
            node.box = (x, y, w, h)
            return h
        if node.tag in ("input", "select", "button"):
            w = width if width is not None else self._intrinsic_w(node, avail_w)
            h = height if height is not None else 28.0
            node.box = (x, y, w, h)
            return h
        if node.tag == "textarea":
            node.box = (x, y, width or 320.0, height or 80.0)
            return node.box[3]
        if node.tag in ("br", "hr"):
            node.box = (x, y, avail_w, 4.0 if node.tag == "hr" else LINE_H)
            return node.box[3]

        if style.get("display") == "inline" or node.tag in INLINE_TEXT_TAGS:
            text = node.subtree_text()
            w = min(len(text) * CHAR_W, avail_w) if text else 0.0
            h = LINE_H if text else 0.0
            node.box = (x, y, float(w), float(h))
            for child in node.children:
                if child.is_element():
                    self._layout_node(child, x, y, w or avail_w)
            return h

        # block flow
        w = width if width is not None else avail_w
        content_h = self._layout_children(node, x, y, w)
        h = height if height is not None else content_h
        node.box = (x, y, w, h)
        return h

    def _layout_children(self, node: DomNode, x: float, y: float, w: float) -> float:
        cy = y
        for child in node.children:
            if child.is_text():
                lines = max(1, -(-len(child.text.strip()) * CHAR_W // int(w)) if w else 1)
                cy += LINE_H * lines if child.text.strip() else 0
            else:
                cy += self._layout_node(child, x, cy, w)
        return cy - y

    @staticmethod
    def _intrinsic_w(node: DomNode, avail_w: float) -> float:
        if node.tag == "button":
            return min(len(node.subtree_text()) * CHAR_W + 24.0, avail_w)
        if node.tag in ("input", "select"):
            return 160.0
        text = node.subtree_text()
        return min(len(text) * CHAR_W, avail_w) if text else avail_w


def parse_html(html: str, url: str = "") -> DomDocument:
    return DomDocument(html, url=url)
