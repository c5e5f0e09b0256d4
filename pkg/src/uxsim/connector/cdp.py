"""Minimal DevTools-protocol client over a hand-rolled WebSocket.

This is the real-browser transport: JSON-RPC commands to a debugging endpoint
(e.g. a headless Chrome started with --remote-debugging-port). The framing
layer implements the client side of RFC 6455 with stdlib sockets only, and
every protocol message is kept in ``message_log`` so sessions can be replayed
or audited.
"""

from __future__ import annotations

import base64
import hashlib
import json
import logging
import os
import socket
import struct
import threading
import urllib.parse
import urllib.request
from dataclasses import dataclass

from ..errors import BrowserGone

log = logging.getLogger(__name__)

_WS_MAGIC = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

OP_TEXT = 0x1
OP_CLOSE = 0x8
OP_PING = 0x9
OP_PONG = 0xA


class WebSocketClient:
    """Client side of RFC 6455: handshake, masked frames, ping/pong, close."""

    def __init__(self, url: str, timeout: float = 30.0):
        parsed = urllib.parse.urlparse(url)
        if parsed.scheme not in ("ws", "http"):
            raise ValueError(f"unsupported scheme {parsed.scheme!r}")
        self.host = parsed.hostname
        self.port = parsed.port or 80
        self.path = parsed.path or "/"
        if parsed.query:
            self.path += "?" + parsed.query
        self.sock = socket.create_connection((self.host, self.port), timeout=timeout)
        self._recv_buffer = b""
        self._lock = threading.Lock()
        self._handshake()

    def _handshake(self):
        key = base64.b64encode(os.urandom(16)).decode()
        request = (
            f"GET {self.path} HTTP/1.1\r\n"
            f"Host: {self.host}:{self.port}\r\n"
            "Upgrade: websocket\r\n"
            "Connection: Upgrade\r\n"
            f"Sec-WebSocket-Key: {key}\r\n"
            "Sec-WebSocket-Version: 13\r\n"
            "\r\n"
        )
        self.sock.sendall(request.encode())
        response = b""
        while b"\r\n\r\n" not in response:
            chunk = self.sock.recv(4096)
            if not chunk:
                raise BrowserGone("connection closed during handshake")
            response += chunk
        head, _, rest = response.partition(b"\r\n\r\n")
        self._recv_buffer = rest
        status_line = head.split(b"\r\n", 1)[0]
        if b"101" not in status_line:
            raise BrowserGone(f"websocket upgrade refused: {status_line!r}")
        expected = base64.b64encode(
            hashlib.sha1((key + _WS_MAGIC).encode()).digest()
        ).decode()
        accept = ""
        for line in head.decode("latin-1").split("\r\n")[1:]:
            name, _, value = line.partition(":")
            if name.strip().lower() == "sec-websocket-accept":
                accept = value.strip()
        if accept != expected:
            raise BrowserGone("websocket accept key mismatch")

    # -- frames --------------------------------------------------------------

    def send_text(self, payload: str):
        data = payload.encode("utf-8")
        header = bytes([0x80 | OP_TEXT])
        length = len(data)
        if length < 126:
            header += bytes([0x80 | length])
        elif length < 1 << 16:
            header += bytes([0x80 | 126]) + struct.pack(">H", length)
        else:
            header += bytes([0x80 | 127]) + struct.pack(">Q", length)
        mask = os.urandom(4)
        masked = bytes(b ^ mask[i % 4] for i, b in enumerate(data))
        with self._lock:
            self.sock.sendall(header + mask + masked)

    def _read_exact(self, n: int) -> bytes:
        while len(self._recv_buffer) < n:
            chunk = self.sock.recv(65536)
            if not chunk:
                raise BrowserGone("connection closed mid-frame")
            self._recv_buffer += chunk
        out, self._recv_buffer = self._recv_buffer[:n], self._recv_buffer[n:]
        return out

    def _read_frame(self) -> tuple[int, bool, bytes]:
        b1, b2 = self._read_exact(2)
        fin = bool(b1 & 0x80)
        opcode = b1 & 0x0F
        masked = bool(b2 & 0x80)
        length = b2 & 0x7F
        if length == 126:
            length = struct.unpack(">H", self._read_exact(2))[0]
        elif length == 127:
            length = struct.unpack(">Q", self._read_exact(8))[0]
        mask = self._read_exact(4) if masked else b""
        payload = self._read_exact(length)
        if masked:
            payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        return opcode, fin, payload

    def recv_text(self) -> str:
        """Next complete text message, transparently answering pings."""
        fragments = b""
        while True:
            opcode, fin, payload = self._read_frame()
            if opcode == OP_PING:
                self._send_control(OP_PONG, payload)
                continue
            if opcode == OP_CLOSE:
                self._send_control(OP_CLOSE, b"")
                raise BrowserGone("websocket closed by peer")
            if opcode in (OP_TEXT, 0x0):
                fragments += payload
                if fin:
                    return fragments.decode("utf-8")

    def _send_control(self, opcode: int, payload: bytes):
        mask = os.urandom(4)
        masked = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))
        with self._lock:
            self.sock.sendall(bytes([0x80 | opcode, 0x80 | len(payload)]) + mask + masked)

    def close(self):
        try:
            self._send_control(OP_CLOSE, b"")
        except OSError:
            pass
        self.sock.close()


@dataclass
class CdpEvent:
    method: str
    params: dict


class CdpClient:
    """JSON-RPC over the websocket; commands matched to replies by id."""

    def __init__(self, ws_url: str, timeout: float = 30.0):
        self.ws = WebSocketClient(ws_url, timeout=timeout)
        self._next_id = 0
        self.events: list[CdpEvent] = []
        self.message_log: list[dict] = []  # {"dir": sent|recv, "msg": payload}

    @classmethod
    def connect(cls, host: str = "127.0.0.1", port: int = 9222, timeout: float = 30.0) -> "CdpClient":
        """Attach to the first page target of a debugging endpoint."""
        with urllib.request.urlopen(f"http://{host}:{port}/json", timeout=timeout) as resp:
            targets = json.loads(resp.read())
        pages = [t for t in targets if t.get("type") == "page"]
        if not pages:
            raise BrowserGone("no page targets exposed by the browser")
        return cls(pages[0]["webSocketDebuggerUrl"], timeout=timeout)

    def call(self, method: str, params: dict | None = None) -> dict:
        self._next_id += 1
        request = {"id": self._next_id, "method": method, "params": params or {}}
        self.message_log.append({"dir": "sent", "msg": request})
        self.ws.send_text(json.dumps(request))
        while True:
            message = json.loads(self.ws.recv_text())
            self.message_log.append({"dir": "recv", "msg": message})
            if message.get("id") == self._next_id:
                if "error" in message:
                    raise BrowserGone(f"{method} failed: {message['error']}")
                return message.get("result", {})
            if "method" in message:
                self.events.append(CdpEvent(message["method"], message.get("params", {})))

    def evaluate(self, expression: str):
        result = self.call(
            "Runtime.evaluate",
            {"expression": expression, "returnByValue": True, "awaitPromise": True},
        )
        return result.get("result", {}).get("value")

    def close(self):
        self.ws.close()


def instrumentation_script() -> str:
    """The page script that annotates hover/click listener registration."""
    from pathlib import Path

    return (Path(__file__).parent / "instrumentation.js").read_text()
