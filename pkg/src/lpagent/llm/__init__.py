from .client import (
    ChatRequest,
    ChatResponse,
    LlmClient,
    TranscriptStore,
    http_transport,
)
from .parsing import CORRECTIVE_NOTE, STAGE_RETRIES, extract_json_block
from .stats import PromptStats, PromptStatsReport, prompt_stats
from .templates import PromptTemplate, load_template, render

__all__ = [
    "ChatRequest",
    "ChatResponse",
    "CORRECTIVE_NOTE",
    "LlmClient",
    "PromptStats",
    "PromptStatsReport",
    "PromptTemplate",
    "STAGE_RETRIES",
    "TranscriptStore",
    "extract_json_block",
    "http_transport",
    "load_template",
    "prompt_stats",
    "render",
]
