"""All fourteen action variants executed against the fixture shop, with
asserted page effects; plus target-validation failure modes and auto-scroll."""

import pytest

from uxsim.connector import (
    TEST_POLICY,
    BrowserAction,
    LocalBrowserSession,
    VARIANTS,
    WebConnector,
)
from uxsim.errors import BrowserGone
from uxsim.fixtures.shop_site import FixtureShopServer


@pytest.fixture(scope="module")
def shop():
    with FixtureShopServer() as server:
        yield server


@pytest.fixture
def connector(shop):
    session = LocalBrowserSession(start_url=shop.url)
    return WebConnector(session, policy=TEST_POLICY)


def current_url(connector):
    return connector.session.tab.url


def test_action_space_has_exactly_fourteen_variants_and_no_scroll():
    assert len(VARIANTS) == 14
    assert "scroll" not in VARIANTS
    with pytest.raises(ValueError):
        BrowserAction(variant="scroll")


def test_click_anchor_navigates(connector):
    connector.observe()
    payload = connector.execute(BrowserAction("click", target="grocery_gourmet_food"))
    assert "grocery" in current_url(connector)
    assert payload.error is None
    assert "Meat Substitutes (79)" in payload.html


def test_click_button_submits_form(connector):
    connector.observe()
    payload = connector.execute(BrowserAction("click", target="add_to_cart"))
    assert "cart-added" in current_url(connector)
    assert "My Cart: 1 (1 items)" in payload.html


def test_hover_reveals_dropdown(connector):
    before = connector.observe()
    assert "outdoor_living" not in before.clickable_ids()
    payload = connector.execute(BrowserAction("hover", target="all_departments"))
    assert "outdoor_living" in payload.clickable_ids()


def test_type_text_reflects_value_then_enter_navigates(connector):
    connector.observe()
    payload = connector.execute(BrowserAction("type_text", target="search_input", text="massage lotion"))
    inputs = {e.semantic_id: e for e in payload.input_elements}
    assert inputs["search_input"].states["value"] == "massage lotion"
    assert inputs["search_input"].states.get("focused") is True
    payload = connector.execute(
        BrowserAction("type_text", target="search_input", text="massage lotion", press_enter=True)
    )
    assert "/search?q=massage+lotion" in current_url(connector)
    assert 'Results for "massage lotion"' in payload.html


def test_key_press_enter_submits_focused_form(connector):
    connector.observe()
    connector.execute(BrowserAction("type_text", target="search_input", text="tofu"))
    connector.execute(BrowserAction("key_press", target="search_input", key="Enter"))
    assert "/search?q=tofu" in current_url(connector)


def test_clear_input_removes_text(connector):
    connector.observe()
    connector.execute(BrowserAction("type_text", target="search_input", text="to be removed"))
    payload = connector.execute(BrowserAction("clear_input", target="search_input"))
    inputs = {e.semantic_id: e for e in payload.input_elements}
    assert "value" not in inputs["search_input"].states


def test_select_option_updates_state(connector):
    connector.observe()
    payload = connector.execute(
        BrowserAction("select_option", target="sort_results", option="Avg. Customer Review")
    )
    selects = {e.semantic_id: e for e in payload.select_elements}
    assert selects["sort_results"].states["selected"] == "Avg. Customer Review"


def test_select_option_unknown_option_records_error(connector):
    connector.observe()
    payload = connector.execute(
        BrowserAction("select_option", target="sort_results", option="Bogus Order")
    )
    assert payload.error is not None
    assert "Bogus Order" in payload.error


def test_navigate_back_forward_refresh(connector, shop):
    connector.observe()
    connector.execute(BrowserAction("navigate", url=shop.url + "grocery.html"))
    assert "grocery" in current_url(connector)
    connector.execute(BrowserAction("back"))
    assert current_url(connector).rstrip("/") == shop.url.rstrip("/")
    connector.execute(BrowserAction("forward"))
    assert "grocery" in current_url(connector)
    payload = connector.execute(BrowserAction("refresh"))
    assert "grocery" in current_url(connector)
    assert "Grocery" in payload.html


def test_tab_management(connector, shop):
    connector.observe()
    payload = connector.execute(BrowserAction("new_tab", url=shop.url + "cart.html"))
    assert len(payload.tabs) == 2
    assert payload.tabs[1].active
    payload = connector.execute(BrowserAction("switch_tab", tab_index=0))
    assert payload.tabs[0].active
    assert "Fixture Shop" in payload.html
    payload = connector.execute(BrowserAction("close_tab", tab_index=1))
    assert len(payload.tabs) == 1


def test_terminate_closes_session_with_answer(connector):
    connector.observe()
    payload = connector.execute(
        BrowserAction("terminate", final_answer="reached checkout")
    )
    assert connector.terminated
    assert connector.session.final_answer == "reached checkout"
    assert payload.html == ""
    with pytest.raises(BrowserGone):
        connector.session.navigate("http://anywhere/")


def test_click_below_the_fold_scrolls_into_view(connector):
    payload = connector.observe()
    assert "special_offers" in payload.clickable_ids()
    box = payload.target_boxes["special_offers"]
    assert box[1] > 720  # genuinely below the fold
    result = connector.execute(BrowserAction("click", target="special_offers"))
    assert "offers" in current_url(connector)
    entry = connector.execution_log[-1]
    assert entry.scrolled_to is not None and entry.scrolled_to > 0
    assert "Special Offers" in result.html


def test_unknown_target_records_error_and_performs_nothing(connector):
    connector.observe()
    url_before = current_url(connector)
    payload = connector.execute(BrowserAction("click", target="nonexistent_id"))
    assert current_url(connector) == url_before
    assert payload.error is not None
    assert "nonexistent_id" in payload.error


def test_error_describes_most_recent_failure_only(connector):
    connector.observe()
    payload = connector.execute(BrowserAction("click", target="ghost_one"))
    assert "ghost_one" in payload.error
    payload = connector.execute(BrowserAction("click", target="ghost_two"))
    assert "ghost_two" in payload.error and "ghost_one" not in payload.error
    payload = connector.execute(BrowserAction("click", target="grocery_gourmet_food"))
    assert payload.error is None


def test_not_interactable_click_records_error(connector):
    connector.observe()
    payload = connector.execute(BrowserAction("click", target="all_departments"))
    assert payload.error is not None
    assert "not clickable" in payload.error


def test_post_action_observation_waits_for_quiescence(shop):
    session = LocalBrowserSession(start_url=shop.url, latency=0.05)
    connector = WebConnector(session, policy=TEST_POLICY)
    connector.observe()
    connector.execute(BrowserAction("click", target="grocery_gourmet_food"))
    entry = connector.execution_log[-1]
    assert entry.waited >= 0.05  # idle window only satisfied after the busy period
    assert not entry.timed_out


def test_quiescence_timeout_noted_in_error(shop):
    session = LocalBrowserSession(start_url=shop.url, latency=5.0)
    connector = WebConnector(session, policy=TEST_POLICY)  # max_wait 0.5 << latency
    connector.observe()
    payload = connector.execute(BrowserAction("click", target="grocery_gourmet_food"))
    entry = connector.execution_log[-1]
    assert entry.timed_out
    assert "Timeout" in payload.error
