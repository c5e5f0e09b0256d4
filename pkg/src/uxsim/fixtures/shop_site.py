"""Local HTTP server for the fixture shop used by tests and offline demos."""

from __future__ import annotations

import threading
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

SHOP_DIR = Path(__file__).parent / "shop"

SEARCH_TEMPLATE = """<!DOCTYPE html>
<html>
<head><title>Search: {query} - Fixture Shop</title><meta charset="utf-8"></head>
<body>
  <header>
    <h1>Fixture Shop</h1>
    <a href="/cart-empty.html">My Cart: 0 (0 items)</a>
  </header>
  <main>
    <h2>Results for "{query}"</h2>
    <section>
      <div class="card">
        <a href="/product-result1.html">{query} - Top Pick</a>
        <p>4.4 out of 5 stars</p>
        <p>612 reviews</p>
        <p>$27.99</p>
        <form action="/cart-added.html" method="get"><button>Add to Cart</button></form>
      </div>
      <div class="card">
        <a href="/product-result2.html">{query} - Budget Choice</a>
        <p>3.9 out of 5 stars</p>
        <p>188 reviews</p>
        <p>$12.49</p>
        <form action="/cart-added.html" method="get"><button>Add to Cart</button></form>
      </div>
    </section>
  </main>
</body>
</html>
"""

PRODUCT_TEMPLATE = """<!DOCTYPE html>
<html>
<head><title>Product - Fixture Shop</title><meta charset="utf-8"></head>
<body>
  <header><h1>Fixture Shop</h1><a href="/cart-empty.html">My Cart: 0 (0 items)</a></header>
  <main>
    <h2>Product detail</h2>
    <p>Detailed description for this product.</p>
    <form action="/cart-added.html" method="get"><button>Add to Cart</button></form>
    <a href="/">Back to home</a>
  </main>
</body>
</html>
"""


class _ShopHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        parsed = urllib.parse.urlparse(self.path)
        path = parsed.path
        if path in ("", "/"):
            path = "/index.html"
        if path == "/search":
            query = urllib.parse.parse_qs(parsed.query).get("q", [""])[0] or "everything"
            self._send(SEARCH_TEMPLATE.format(query=_escape(query)))
            return
        if path.startswith("/product-") and path.endswith(".html"):
            file = SHOP_DIR / path.lstrip("/")
            self._send(file.read_text() if file.exists() else PRODUCT_TEMPLATE)
            return
        file = SHOP_DIR / path.lstrip("/")
        if file.exists() and file.suffix == ".html":
            self._send(file.read_text())
        else:
            self._send(f"<html><head><title>Not Found</title></head><body><h2>Page not found</h2><p>{_escape(path)}</p><a href='/'>Home</a></body></html>", status=404)

    def _send(self, body: str, status: int = 200):
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "text/html; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, fmt, *args):  # keep tests quiet
        pass


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


class FixtureShopServer:
    """Threaded server on an ephemeral port; use as a context manager."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self.httpd = ThreadingHTTPServer((host, port), _ShopHandler)
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}/"

    def __enter__(self) -> "FixtureShopServer":
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.httpd.shutdown()
        self.httpd.server_close()
