"""HTTP adapter speaking a chat-completions-style request body.

Configured by ProviderConfig plus the UXSIM_LLM_ENDPOINT / UXSIM_LLM_KEY
environment variables. Provider-neutral: any endpoint accepting the common
``{"model": ..., "messages": [...]}`` shape works.
"""

from __future__ import annotations

import os

import requests

from .gateway import TransientProviderError
from .types import ChatRequest, ProviderConfig

RETRYABLE_STATUS = {408, 409, 429, 500, 502, 503, 504}


class HttpProvider:
    def __init__(self, timeout: float = 120.0):
        self.timeout = timeout
        self.session = requests.Session()

    def _endpoint(self, cfg: ProviderConfig) -> str:
        endpoint = cfg.endpoint or os.environ.get("UXSIM_LLM_ENDPOINT", "")
        if not endpoint:
            raise ValueError("no provider endpoint configured (UXSIM_LLM_ENDPOINT)")
        return endpoint.rstrip("/")

    def _headers(self, cfg: ProviderConfig) -> dict:
        key = cfg.api_key or os.environ.get("UXSIM_LLM_KEY", "")
        headers = {"Content-Type": "application/json"}
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def chat(self, req: ChatRequest, cfg: ProviderConfig) -> str:
        messages = [{"role": m.role, "content": m.content} for m in req.messages]
        if req.image is not None and messages:
            # attach the page screenshot to the last user message
            import base64

            encoded = base64.b64encode(req.image).decode()
            for message in reversed(messages):
                if message["role"] == "user":
                    message["content"] = [
                        {"type": "text", "text": message["content"]},
                        {"type": "image_url",
                         "image_url": {"url": f"data:image/png;base64,{encoded}"}},
                    ]
                    break
        body = {
            "model": cfg.model_id,
            "messages": messages,
            "temperature": req.temperature,
            "max_tokens": req.max_output,
        }
        try:
            resp = self.session.post(
                f"{self._endpoint(cfg)}/chat/completions",
                json=body,
                headers=self._headers(cfg),
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransientProviderError(str(exc)) from exc
        if resp.status_code in RETRYABLE_STATUS:
            raise TransientProviderError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        resp.raise_for_status()
        data = resp.json()
        return data["choices"][0]["message"]["content"]

    def embed(self, text: str, cfg: ProviderConfig) -> list[float]:
        body = {"model": cfg.embed_model_id, "input": text}
        try:
            resp = self.session.post(
                f"{self._endpoint(cfg)}/embeddings",
                json=body,
                headers=self._headers(cfg),
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransientProviderError(str(exc)) from exc
        if resp.status_code in RETRYABLE_STATUS:
            raise TransientProviderError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        resp.raise_for_status()
        return resp.json()["data"][0]["embedding"]
