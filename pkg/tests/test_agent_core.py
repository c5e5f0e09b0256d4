import json
from pathlib import Path

import pytest

from uxsim.agent import AgentModules, AgentState, PromptCapture
from uxsim.connector import observe_document, parse_html
from uxsim.errors import SchemaViolation
from uxsim.llm import MockChatProvider
from uxsim.memory import MemoryStream

from conftest import make_gateway

CORPUS = Path(__file__).parent / "data" / "dom_corpus"


def card_observation():
    doc = parse_html((CORPUS / "11_product_card.html").read_text())
    return observe_document(doc)


def build_modules(provider, persona, intent="buy a meat substitute", capture=None):
    gw = make_gateway(provider)
    return AgentModules(
        gateway=gw, stream=MemoryStream(), persona=persona, intent=intent,
        capture=capture or PromptCapture(enabled=False),
    )


# -- perceive -----------------------------------------------------------------

def test_perceive_product_card_mentions_all_four_facts(example_persona):
    provider = MockChatProvider()
    provider.add('{"observations"', json.dumps({"observations": [
        "I see the Heavy Duty Truck Bed Liner Kit, rated 4.3 out of 5 stars "
        "from 1,287 reviews, priced at $189.00."
    ]}))
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    pieces = modules.perceive(card_observation(), state)
    assert len(pieces) == 1
    note = pieces[0].content
    for fact in ("Heavy Duty Truck Bed Liner Kit", "4.3", "1,287", "$189.00"):
        assert fact in note
    assert pieces[0].kind == "observation"
    assert modules.stream.get(pieces[0].id).content == note


def test_perceive_records_error_text(example_persona):
    provider = MockChatProvider()
    provider.add('{"observations"', json.dumps({"observations": ["A plain page."]}))
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    obs = card_observation()
    obs.error = "UnknownTarget: element not found"
    pieces = modules.perceive(obs, state)
    assert any("element not found" in p.content for p in pieces)


def test_perceive_empty_page_yields_single_empty_note(example_persona):
    provider = MockChatProvider()
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    obs = card_observation()
    obs.html = "   "
    pieces = modules.perceive(obs, state)
    assert len(pieces) == 1
    assert "empty" in pieces[0].content.lower()


# -- planning ------------------------------------------------------------------

def test_plan_initial_fixed_three_steps(example_persona):
    provider = MockChatProvider()
    provider.add("(no plan yet", json.dumps({
        "steps": ["Search online stores", "Review the search results", "Pick a product"],
        "rationale": "Start broad, then narrow.",
        "next_step": 0,
    }))
    modules = build_modules(provider, example_persona, intent="buy a sofa")
    state = AgentState(example_persona, "buy a sofa")
    plan = modules.plan_initial(state)
    assert len(plan.steps) == 3
    assert plan.next_step == 0
    assert any("Search" in s for s in plan.steps)
    assert any("Review" in s for s in plan.steps)
    # plan memory appended
    kinds = [p.kind for p in modules.stream.all_pieces()]
    assert kinds == ["plan"]


def test_plan_initial_empty_steps_is_schema_violation(example_persona):
    provider = MockChatProvider()
    provider.add("(no plan yet", json.dumps({"steps": [], "rationale": "none", "next_step": 0}))
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    with pytest.raises(SchemaViolation):
        modules.plan_initial(state)


def test_plan_update_appends_new_plan_and_keeps_history(example_persona):
    provider = MockChatProvider()
    provider.add("(no plan yet", json.dumps({
        "steps": ["Search", "Review results"], "rationale": "start", "next_step": 0}))
    provider.add("Create or update", json.dumps({
        "steps": ["Search", "Review detailed information", "Consider purchase"],
        "rationale": "A matching sofa appeared.", "next_step": 1}))
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    modules.plan_initial(state)
    state.step_clock = 1
    plan = modules.plan_update(state)
    assert "Review detailed information" in plan.steps
    plans = [p for p in modules.stream.all_pieces() if p.kind == "plan"]
    assert len(plans) == 2  # history preserved


# -- act --------------------------------------------------------------------------

def test_act_type_text_on_search_input(example_persona):
    doc = parse_html(
        '<html><body><form><input type="text" aria-label="Search input">'
        "<button>Search</button></form></body></html>"
    )
    obs = observe_document(doc)
    provider = MockChatProvider()
    provider.add("(no plan yet", json.dumps({
        "steps": ["search for massage lotion", "review results"],
        "rationale": "start", "next_step": 0}))
    provider.add('{"action"', json.dumps({
        "action": "type_text", "target": "search_input", "text": "massage lotion",
        "press_enter": True, "description": "Searching for massage lotion"}))
    modules = build_modules(provider, example_persona, intent="buy massage lotion")
    state = AgentState(example_persona, "buy massage lotion")
    modules.plan_initial(state)
    decision = modules.act(state, obs)
    assert decision.action.variant == "type_text"
    assert decision.action.target == "search_input"
    assert decision.action.text == "massage lotion"
    actions = [p for p in modules.stream.all_pieces() if p.kind == "action"]
    assert len(actions) == 1


def test_act_invalid_target_reprompts_then_succeeds(example_persona):
    obs = card_observation()
    provider = MockChatProvider()
    provider.add("previous choice was invalid", json.dumps({
        "action": "click", "target": "add_to_cart", "description": "Adding the liner kit to cart"}))
    provider.add('{"action"', json.dumps({
        "action": "click", "target": "ghost_button", "description": "Clicking a button that is not there"}))
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    state.current_plan = None
    decision = modules.act(state, obs)
    assert decision.action.target == "add_to_cart"
    # the corrective prompt carried the invalid-target explanation
    assert any("ghost_button" in text for text in provider.calls)


def test_act_invalid_twice_falls_back_to_terminate(example_persona):
    obs = card_observation()
    provider = MockChatProvider()
    provider.add('{"action"', json.dumps({
        "action": "click", "target": "ghost_button", "description": "Still clicking a ghost"}))
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    decision = modules.act(state, obs)
    assert decision.action.variant == "terminate"
    assert "ghost_button" in (decision.action.final_answer or "")


# -- slow-loop modules ----------------------------------------------------------------

def seeded_stream_modules(example_persona, provider):
    modules = build_modules(provider, example_persona)
    state = AgentState(example_persona, modules.intent)
    modules._remember("observation", "An advertising banner for unrelated socks.",
                      "perception", 0)
    modules._remember("observation", "A product listing for a meat substitute at $149.99.",
                      "perception", 0)
    return modules, state


def test_reflect_appends_thought(example_persona):
    provider = MockChatProvider()
    provider.add("Step back and think", json.dumps({"thought": "Filters would speed this up."}))
    modules, state = seeded_stream_modules(example_persona, provider)
    piece = modules.reflect(state)
    assert piece.kind == "thought"
    assert piece.source_module == "reflection"
    assert "Filters" in piece.content


def test_reflect_on_empty_stream_is_skipped(example_persona):
    modules = build_modules(MockChatProvider(), example_persona)
    state = AgentState(example_persona, modules.intent)
    assert modules.reflect(state) is None


def test_reflect_gateway_failure_tolerated(example_persona):
    provider = MockChatProvider()  # no rules: every call fails
    modules, state = seeded_stream_modules(example_persona, provider)
    assert modules.reflect(state) is None  # logged, not raised


def test_wonder_flagged_in_metadata(example_persona):
    provider = MockChatProvider()
    provider.add("Your mind briefly drifts", json.dumps({"thought": "I wonder if it will rain."}))
    modules, state = seeded_stream_modules(example_persona, provider)
    piece = modules.wonder(state)
    assert piece.metadata.get("wonder") is True
    assert piece.source_module == "wonder"


def test_importance_batch_scores_and_clamps(example_persona):
    provider = MockChatProvider()

    def scores(request_text):
        import re
        ids = re.findall(r"^- id (m\d+):", request_text, flags=re.MULTILINE)
        values = [0.1, 1.5]  # second one out of range: must clamp to 1.0
        return json.dumps({"scores": [
            {"id": i, "score": values[k % 2]} for k, i in enumerate(ids)
        ]})

    provider.add('{"scores"', reply_fn=scores)
    modules, state = seeded_stream_modules(example_persona, provider)
    scored = modules.score_importance_batch(state)
    assert scored == 2
    pieces = modules.stream.all_pieces()
    assert pieces[0].importance == 0.1
    assert pieces[1].importance == 1.0  # clamped


def test_importance_batch_excludes_already_scored(example_persona):
    provider = MockChatProvider()
    provider.add('{"scores"', reply_fn=lambda text: json.dumps({"scores": []}))
    modules, state = seeded_stream_modules(example_persona, provider)
    modules.stream.set_importance(modules.stream.all_pieces()[0].id, 0.9)
    assert len(modules.stream.unscored()) == 1
    modules.score_importance_batch(state)
    assert modules.stream.all_pieces()[0].importance == 0.9


# -- survey ------------------------------------------------------------------------

class Question:
    def __init__(self, id, kind, text, scale=None):
        self.id, self.kind, self.text, self.scale = id, kind, text, scale


def test_survey_all_threes(example_persona):
    provider = MockChatProvider()
    provider.add('{"answer"', json.dumps({"answer": 3}))
    modules, _ = seeded_stream_modules(example_persona, provider)
    questions = [Question(f"q{i}", "likert", f"Statement {i}", (1, 5)) for i in range(3)]
    answers = modules.answer_survey(questions)
    assert [a["answer"] for a in answers] == [3, 3, 3]


def test_survey_out_of_scale_reprompts_then_raises(example_persona):
    provider = MockChatProvider()
    provider.add('{"answer"', json.dumps({"answer": 7}))
    modules, _ = seeded_stream_modules(example_persona, provider)
    with pytest.raises(SchemaViolation):
        modules.answer_survey([Question("q1", "likert", "Statement", (1, 5))])


def test_survey_open_answer_nonempty(example_persona):
    provider = MockChatProvider()
    provider.add('{"answer"', json.dumps({"answer": "The filters were easy to find."}))
    modules, _ = seeded_stream_modules(example_persona, provider)
    answers = modules.answer_survey([Question("q1", "open", "What did you think?")])
    assert answers[0]["answer"].startswith("The filters")


def test_screenshot_passes_into_prompt_only_when_enabled(example_persona):
    provider = MockChatProvider()
    provider.add('{"observations"', json.dumps({"observations": ["A shop page."]}))
    captured = []

    class Recorder:
        def __init__(self, inner):
            self.inner = inner
            self.cfg = inner.cfg

        def complete(self, req, cfg=None):
            captured.append(req)
            return self.inner.complete(req, cfg)

        def embed(self, text, cfg=None):
            return self.inner.embed(text, cfg)

    gw = Recorder(make_gateway(provider))
    obs = card_observation()
    obs.screenshot = b"\x89PNG fake bytes"

    modules = AgentModules(gateway=gw, stream=MemoryStream(), persona=example_persona,
                           intent="buy a kit", screenshot_in_prompt=True)
    state = AgentState(example_persona, "buy a kit")
    modules.perceive(obs, state)
    assert captured[-1].image == obs.screenshot
    assert "screenshot of this page is attached" in captured[-1].messages[-1].content

    # default mode: text-only, image never attached
    captured.clear()
    modules_off = AgentModules(gateway=gw, stream=MemoryStream(), persona=example_persona,
                               intent="buy a kit")
    modules_off.perceive(obs, AgentState(example_persona, "buy a kit"))
    assert captured[-1].image is None
