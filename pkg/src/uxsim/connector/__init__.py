from .actions import VARIANTS, BrowserAction
from .connector import TEST_POLICY, QuiescencePolicy, WebConnector
from .dom import DomDocument, DomNode, parse_html
from .local_browser import LocalBrowserSession
from .observation import ElementDescriptor, ObservationPayload, TabInfo, observe_document

__all__ = [
    "BrowserAction",
    "DomDocument",
    "DomNode",
    "ElementDescriptor",
    "LocalBrowserSession",
    "ObservationPayload",
    "QuiescencePolicy",
    "TabInfo",
    "TEST_POLICY",
    "VARIANTS",
    "WebConnector",
    "observe_document",
    "parse_html",
]
