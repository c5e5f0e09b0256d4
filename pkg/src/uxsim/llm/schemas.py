"""Structured-output schemas the gateway can enforce on chat replies.

Agent prompts ask for a JSON object; replies are validated against the named
schema here and re-prompted (with the validation error appended) when they
don't parse or don't conform.
"""

from __future__ import annotations

import json

import jsonschema

SCHEMAS: dict[str, dict] = {
    "plan": {
        "type": "object",
        "properties": {
            "steps": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            "rationale": {"type": "string", "minLength": 1},
            "next_step": {"type": "integer", "minimum": 0},
        },
        "required": ["steps", "rationale", "next_step"],
    },
    "action": {
        "type": "object",
        "properties": {
            "action": {"type": "string", "minLength": 1},
            "target": {"type": ["string", "null"]},
            "description": {"type": "string", "minLength": 1},
            "text": {"type": "string"},
            "key": {"type": "string"},
            "option": {"type": "string"},
            "url": {"type": "string"},
            "tab_index": {"type": "integer"},
            "press_enter": {"type": "boolean"},
            "final_answer": {"type": "string"},
        },
        "required": ["action", "description"],
    },
    "observations": {
        "type": "object",
        "properties": {
            "observations": {
                "type": "array",
                "items": {"type": "string", "minLength": 1},
            }
        },
        "required": ["observations"],
    },
    "thought": {
        "type": "object",
        "properties": {"thought": {"type": "string", "minLength": 1}},
        "required": ["thought"],
    },
    "importance_scores": {
        "type": "object",
        "properties": {
            "scores": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "id": {"type": "string"},
                        "score": {"type": "number"},
                    },
                    "required": ["id", "score"],
                },
            }
        },
        "required": ["scores"],
    },
    "likert_answer": {
        "type": "object",
        "properties": {"answer": {"type": "integer"}},
        "required": ["answer"],
    },
    "open_answer": {
        "type": "object",
        "properties": {"answer": {"type": "string", "minLength": 1}},
        "required": ["answer"],
    },
}


def validate(schema_name: str, raw: str) -> dict:
    """Parse ``raw`` as JSON and check it against the named schema.

    Raises ValueError with a human-readable reason on any mismatch; the
    gateway feeds that reason back into the re-prompt.
    """
    if schema_name not in SCHEMAS:
        raise KeyError(f"unknown response schema {schema_name!r}")
    text = raw.strip()
    # tolerate fenced replies, a common LLM tic
    if text.startswith("```"):
        text = text.strip("`")
        if text.startswith("json"):
            text = text[4:]
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"reply is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(obj, SCHEMAS[schema_name])
    except jsonschema.ValidationError as exc:
        raise ValueError(f"reply does not match schema {schema_name!r}: {exc.message}") from exc
    return obj
