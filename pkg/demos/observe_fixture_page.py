#!/usr/bin/env python3
"""Show what the DOM pipeline turns a page into.

Serves the built-in fixture shop, loads the landing page in the in-process
browser, and prints the simplified markup plus the element inventories the
agent would see, before and after hovering the departments menu.
"""

from uxsim.connector import TEST_POLICY, BrowserAction, LocalBrowserSession, WebConnector
from uxsim.fixtures.shop_site import FixtureShopServer


def show(payload, title):
    print(f"\n=== {title} ===")
    print(payload.html)
    print("\nclickable:", sorted(payload.clickable_ids()))
    print("inputs:   ", [e.semantic_id for e in payload.input_elements])
    print("hoverable:", [e.semantic_id for e in payload.hoverable_elements])
    print("selects:  ", [e.semantic_id for e in payload.select_elements])
    print("tabs:     ", [(t.index, t.title, t.active) for t in payload.tabs])
    print("error:    ", payload.error)


def main():
    with FixtureShopServer() as shop:
        connector = WebConnector(LocalBrowserSession(start_url=shop.url), policy=TEST_POLICY)
        show(connector.observe(), "landing page, as observed")
        payload = connector.execute(BrowserAction("hover", target="all_departments"))
        show(payload, "after hovering the departments menu (dropdown revealed)")
        payload = connector.execute(BrowserAction("click", target="does_not_exist"))
        print("\nafter a click on a bogus id, the next observation reports:")
        print("  error:", payload.error)


if __name__ == "__main__":
    main()
