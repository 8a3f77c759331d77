"""Structured-output contract: one fenced JSON block per LLM response."""

from __future__ import annotations

import json
import re
from typing import Any

from ..errors import MalformedLLMOutput

_FENCE_RE = re.compile(r"```(?:json)?\s*\n(.*?)```", re.DOTALL)

# Retries per stage on malformed output, with a corrective instruction appended.
STAGE_RETRIES = 2

CORRECTIVE_NOTE = (
    "\n\nYour previous reply could not be parsed. Respond with exactly one "
    "fenced ```json code block containing a single JSON object and nothing else."
)


def extract_json_block(text: str) -> dict[str, Any]:
    blocks = _FENCE_RE.findall(text)
    if len(blocks) != 1:
        raise MalformedLLMOutput(
            f"expected exactly one fenced JSON block, found {len(blocks)}"
        )
    try:
        doc = json.loads(blocks[0])
    except json.JSONDecodeError as exc:
        raise MalformedLLMOutput(f"fenced block is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedLLMOutput("fenced block must contain a JSON object")
    return doc
