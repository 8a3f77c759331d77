"""Run configuration and LLM client construction.

Endpoint settings come from an optional JSON config file (path in
LPAGENT_CONFIG, default ./lpagent.json) overridden by environment variables
LPAGENT_BASE_URL, LPAGENT_API_KEY, LPAGENT_MODEL.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SolverNotConfigured
from .execution.backends import Limits, default_solver_cmd
from .llm import LlmClient, TranscriptStore, http_transport


@dataclass
class PipelineConfig:
    budget: int = 10
    policy: str = "rule"  # "rule" | "llm"
    techniques: bool = False
    code_target: str = "amdl"  # "amdl" | "script"
    debug: bool = True  # off = programmer refuses fixing mode
    solver_cmd: str | None = None
    solution_dialect: str = "A"
    runner_cmd: str = ""
    prompts_dir: str | None = None
    keep_artifacts: bool = False
    artifacts_dir: str | None = None
    limits: Limits = field(default_factory=Limits)
    mode: str = "replay"  # llm access mode: live | record | replay
    transcripts_dir: str = "fixtures/transcripts"
    model: str = "default-model"

    def resolved_solver_cmd(self) -> str:
        return self.solver_cmd or default_solver_cmd()


def _file_settings() -> dict:
    path = Path(os.environ.get("LPAGENT_CONFIG", "lpagent.json"))
    if path.exists():
        return json.loads(path.read_text())
    return {}


def build_client(config: PipelineConfig, transport=None) -> LlmClient:
    """Build the chat client for the configured mode.

    A custom `transport` (tests, canned providers) bypasses endpoint settings.
    """
    store = TranscriptStore(config.transcripts_dir)
    if config.mode == "replay":
        return LlmClient(mode="replay", store=store, model=config.model)
    if transport is None:
        settings = _file_settings()
        base_url = os.environ.get("LPAGENT_BASE_URL", settings.get("base_url", ""))
        api_key = os.environ.get("LPAGENT_API_KEY", settings.get("api_key", ""))
        model = os.environ.get("LPAGENT_MODEL", settings.get("model", config.model))
        if not base_url:
            raise SolverNotConfigured(
                "live/record mode needs LPAGENT_BASE_URL (or base_url in the config file)"
            )
        config.model = model
        transport = http_transport(base_url, api_key)
    return LlmClient(mode=config.mode, store=store, transport=transport,
                     model=config.model)
