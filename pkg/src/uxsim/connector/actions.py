"""The fourteen primitive browser interactions.

Element-level actions reference targets by semantic id. There is deliberately
no scroll variant: the executor scrolls targets into view on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field

VARIANTS = frozenset({
    "click", "hover", "key_press",
    "type_text", "clear_input", "select_option",
    "navigate", "back", "forward", "refresh",
    "new_tab", "switch_tab", "close_tab", "terminate",
})

TARGET_REQUIRED = frozenset({"click", "hover", "type_text", "clear_input", "select_option"})


@dataclass
class BrowserAction:
    variant: str
    target: str | None = None
    text: str | None = None          # type_text
    key: str | None = None           # key_press
    option: str | None = None        # select_option
    url: str | None = None           # navigate, new_tab
    tab_index: int | None = None     # switch_tab, close_tab
    press_enter: bool = False        # type_text
    final_answer: str | None = None  # terminate

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown action variant {self.variant!r}")
        if self.variant in TARGET_REQUIRED and not self.target:
            raise ValueError(f"action {self.variant!r} requires a target")
        if self.variant == "navigate" and not self.url:
            raise ValueError("navigate requires a url")
        if self.variant in ("switch_tab", "close_tab") and self.tab_index is None:
            raise ValueError(f"{self.variant} requires tab_index")
        if self.variant == "type_text" and self.text is None:
            raise ValueError("type_text requires text")
        if self.variant == "select_option" and self.option is None:
            raise ValueError("select_option requires option")
        if self.variant == "key_press" and not self.key:
            raise ValueError("key_press requires key")

    def targets_element(self) -> bool:
        return self.variant in TARGET_REQUIRED or (self.variant == "key_press" and self.target)

    @classmethod
    def from_dict(cls, data: dict) -> "BrowserAction":
        return cls(
            variant=data["action"],
            target=data.get("target"),
            text=data.get("text"),
            key=data.get("key"),
            option=data.get("option"),
            url=data.get("url"),
            tab_index=data.get("tab_index"),
            press_enter=bool(data.get("press_enter", False)),
            final_answer=data.get("final_answer"),
        )

    def trace_record(self, description: str) -> dict:
        """The action-trace line: action, target (when present), description."""
        record = {"action": self.variant}
        if self.target:
            record["target"] = self.target
        record["description"] = description
        return record
