#!/usr/bin/env python3
"""Run a complete offline study: three simulated participants shop the
fixture site end to end, answer the survey, and get interviewed.

Everything is deterministic: the LLM is the scripted mock provider, the
browser is the in-process engine, and the site is the bundled fixture shop.
Artifacts land in ./demo_runs/<run_id>/ as plain files.
"""

import json
import random

from uxsim.fixtures.shop_site import FixtureShopServer
from uxsim.llm import Gateway, MockChatProvider, ProviderConfig
from uxsim.persona import DemographicField, DemographicSpec, load_example_persona
from uxsim.study import RunStore, StudyConfig, StudyRunner, aggregate, subgroup_summary


def scripted_provider() -> MockChatProvider:
    """Replies that walk the category -> price filter -> cart -> checkout path."""
    p = MockChatProvider()
    p.add("(no plan yet", json.dumps({
        "steps": ["Open the grocery department",
                  "Filter meat substitutes to my budget",
                  "Add the best rated product and reach checkout"],
        "rationale": "Category plus price filter is the fastest route.",
        "next_step": 0}))
    p.add("Create or update your short-term plan", json.dumps({
        "steps": ["Filter meat substitutes to my budget",
                  "Add the best rated product and reach checkout"],
        "rationale": "Keep narrowing down.", "next_step": 0}))
    p.add('{"observations"', json.dumps({"observations": [
        "I am scanning the page from the top; navigation first, then products."]}))
    p.add("Step back and think", json.dumps({
        "thought": "The price facet saved me from scrolling through everything."}))
    p.add("Your mind briefly drifts", json.dumps({
        "thought": "I still need to plan dinner for Friday."}))

    def importance(text):
        import re
        ids = re.findall(r"^- id (m\d+):", text, re.MULTILINE)
        return json.dumps({"scores": [{"id": i, "score": 0.6} for i in ids]})

    p.add('{"scores"', reply_fn=importance)

    def sheet(text):
        import re
        demo = dict(re.findall(r"^- have the ([^:]+): (.+)$", text, re.MULTILINE))
        demo.setdefault("Age", "34")
        lines = "\n".join(f"{k}: {v}" for k, v in demo.items())
        return ("Persona: Jordan\n\nBackground:\nJordan cooks plant-forward meals.\n\n"
                f"Demographics:\n{lines}\n\nFinancial Situation:\nComfortable.\n\n"
                "Shopping Habits:\nCompares ratings before buying.\n\n"
                "Professional Life:\nWorks in logistics.\n\nPersonal Style:\nPractical.\n\n"
                "Intent:\nbuy a well-rated meat substitute within budget\n")

    p.add("generates diverse personas", reply_fn=sheet)
    for marker, action in [
        ("place_your_order", {"action": "terminate", "final_answer": "reached checkout",
                              "description": "Intent completed - reached the checkout page"}),
        ("proceed_to_checkout", {"action": "click", "target": "proceed_to_checkout",
                                 "description": "Proceeding to checkout"}),
        ("continue_shopping", {"action": "click", "target": "my_cart_1_1_items",
                               "description": "Opening my cart"}),
        ("add_to_cart4", {"action": "click", "target": "add_to_cart2",
                          "description": "Adding the best rated crumble to my cart"}),
        ("100_00_199_99_4_item", {"action": "click", "target": "100_00_199_99_4_item",
                                  "description": "Applying the $100-$199.99 price filter"}),
        ("meat_substitutes_79", {"action": "click", "target": "meat_substitutes_79",
                                 "description": "Opening the meat substitutes category"}),
        ("special_offers", {"action": "click", "target": "grocery_gourmet_food",
                            "description": "Starting in the grocery department"}),
    ]:
        p.add(marker, json.dumps(action))
    p.add("Answer with a single integer", json.dumps({"answer": 4}))
    p.add("Answer in a few honest sentences", json.dumps({
        "answer": "The price filter made the budget constraint easy to respect."}))
    p.add("A researcher interrupts", "At that point I had just applied the price filter "
          "because the full list was too long to scan.")
    return p


def main():
    gateway = Gateway(scripted_provider(), ProviderConfig(rate_limit=60000))
    with FixtureShopServer() as shop:
        config = StudyConfig(
            url=shop.url,
            task="Buy a meat substitute with the highest rating within $100-$200.",
            n_participants=3,
            demographic_spec=DemographicSpec([
                DemographicField("gender", [("male", 1), ("female", 1), ("non-binary", 1)]),
                DemographicField("shopping_frequency", [("Weekly", 1), ("Monthly", 1), ("Yearly", 1)]),
            ]),
            example_persona=load_example_persona(),
            step_budget=15,
            parallelism=3,
            filter_click_targets=["100_00_199_99_4_item", "meat_substitutes_79"],
            quiescence={"network_idle_window": 0.01, "dom_mutation_idle_window": 0.01,
                        "max_wait": 0.5, "poll_interval": 0.002},
        )
        store = RunStore("demo_runs")
        runner = StudyRunner(store, gateway)
        run = runner.run_study(config)

        print(f"run {run.run_id}: {len(run.sessions)} sessions")
        rows = aggregate(run)
        for row in rows:
            print(f"  {row.agent_id}: {row.gender:>10} {row.shopping_frequency:>8} "
                  f"actions={row.total_actions} filter_clicks={row.filter_clicks} "
                  f"sus={row.sus_score} satisfaction={row.filter_satisfaction}")
        print("\nby gender:", json.dumps(subgroup_summary(rows, "gender"), indent=2)[:400], "...")

        answer = runner.interview(run.run_id, "a01",
                                  "Why did you use the price filter?", at_timestamp=3)
        print(f"\ninterview (at step 3): {answer}")
        print(f"\nartifacts: {store.run_dir(run.run_id)}")


if __name__ == "__main__":
    main()
