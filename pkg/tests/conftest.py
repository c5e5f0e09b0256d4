import json
import re

import pytest

from uxsim.llm import Gateway, MockChatProvider, ProviderConfig
from uxsim.persona import load_example_persona, parse_persona


@pytest.fixture
def example_persona():
    return load_example_persona()


def make_gateway(provider=None, **cfg_kwargs) -> Gateway:
    provider = provider or MockChatProvider(default_reply="OK")
    cfg_kwargs.setdefault("max_retries", 2)
    cfg_kwargs.setdefault("rate_limit", 600000)  # effectively unthrottled in tests
    return Gateway(provider, ProviderConfig(**cfg_kwargs), sleep=lambda s: None)


def importance_echo(request_text: str) -> str:
    """Score 0.5 for every memory id listed in an importance prompt."""
    ids = re.findall(r"^- id (m\d+):", request_text, re.MULTILINE)
    return json.dumps({"scores": [{"id": i, "score": 0.5} for i in ids]})


def add_slow_loop_rules(provider: MockChatProvider, insight: str = "Staying focused on the goal.",
                        reflect_delay: float = 0.0):
    provider.add("Step back and think", json.dumps({"thought": insight}), delay=reflect_delay)
    provider.add("Your mind briefly drifts", json.dumps({"thought": "I should water my plants tonight."}))
    provider.add('{"scores"', reply_fn=importance_echo)


def add_act_rule(provider: MockChatProvider, page_marker: str, action: dict, **kwargs):
    """Scripted action for one page, matched by a marker unique to that page."""
    rule = provider.add(page_marker, json.dumps(action), **kwargs)
    return rule


def shop_journey_provider(reflect_delay: float = 0.0, fast_delay: float = 0.0) -> MockChatProvider:
    """Scripted mock that walks the canonical category -> filter -> cart ->
    checkout journey on the fixture shop. Act rules are registered in reverse
    journey order so each page's marker wins even when earlier markers linger
    in retrieved memories."""
    provider = MockChatProvider()
    provider.add(
        "(no plan yet",
        json.dumps({
            "steps": [
                "Open the grocery category",
                "Narrow down to meat substitutes within my budget",
                "Add the best rated option to the cart and reach checkout",
            ],
            "rationale": "Category browsing then filters is the fastest route to a within-budget pick.",
            "next_step": 0,
        }),
        delay=fast_delay,
    )
    provider.add(
        "Create or update your short-term plan",
        json.dumps({
            "steps": [
                "Narrow down to meat substitutes within my budget",
                "Add the best rated option to the cart and reach checkout",
            ],
            "rationale": "Keep moving toward checkout.",
            "next_step": 0,
        }),
        delay=fast_delay,
    )
    provider.add('{"observations"', json.dumps(
        {"observations": ["I am looking at a shopping page with navigation and products."]}
    ), delay=fast_delay)
    add_slow_loop_rules(provider, reflect_delay=reflect_delay)

    journey = [
        ("place_your_order", {"action": "terminate",
                              "final_answer": "reached checkout",
                              "description": "Intent completed - reached the checkout page with the best rated pick in budget"}),
        ("proceed_to_checkout", {"action": "click", "target": "proceed_to_checkout",
                                 "description": "Heading to the checkout page"}),
        ("continue_shopping", {"action": "click", "target": "my_cart_1_1_items",
                               "description": "Opening the cart to check out"}),
        ("add_to_cart4", {"action": "click", "target": "add_to_cart2",
                          "description": "Adding the best rated crumble in my budget to the cart"}),
        ("100_00_199_99_4_item", {"action": "click", "target": "100_00_199_99_4_item",
                                  "description": "Applying the price band that fits my budget"}),
        ("meat_substitutes_79", {"action": "click", "target": "meat_substitutes_79",
                                 "description": "Opening the category I need from the sidebar"}),
        ("special_offers", {"action": "click", "target": "grocery_gourmet_food",
                            "description": "Starting from the grocery department in the top navigation"}),
    ]
    for marker, action in journey:
        add_act_rule(provider, marker, action, delay=fast_delay)
    return provider


def echo_sheet_reply(request_text: str) -> str:
    """Build a valid persona sheet honoring the constraints in the prompt.

    Used to script the mock for batch generation: reads the '- have the X: Y'
    lines and emits a sheet whose Demographics block repeats them.
    """
    constraints = re.findall(r"^- have the ([^:]+): (.+)$", request_text, re.MULTILINE)
    demo = {key.strip(): value.strip() for key, value in constraints}
    demo.setdefault("Age", "35")
    demo.setdefault("Gender", "Female")
    demo_lines = "\n".join(f"{k}: {v}" for k, v in demo.items())
    return (
        "Persona: Alex\n\n"
        "Background:\nAlex shops online.\n\n"
        f"Demographics:\n{demo_lines}\n\n"
        "Financial Situation:\nStable.\n\n"
        "Shopping Habits:\nBuys weekly groceries online.\n\n"
        "Professional Life:\nWorks in an office.\n\n"
        "Personal Style:\nCasual.\n\n"
        "Intent:\nbuy a meat substitute within budget\n"
    )
