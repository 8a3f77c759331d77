"""Prompt-length accounting over run records (character units)."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

from ..errors import EmptyRecord


@dataclass
class PromptStats:
    count: int
    mean: float
    stddev: float
    max: int

    @classmethod
    def of(cls, lengths: list[int]) -> "PromptStats":
        return cls(
            count=len(lengths),
            mean=statistics.fmean(lengths),
            stddev=statistics.pstdev(lengths) if len(lengths) > 1 else 0.0,
            max=max(lengths),
        )


@dataclass
class PromptStatsReport:
    overall: PromptStats
    per_agent: dict[str, PromptStats] = field(default_factory=dict)


def prompt_stats(events: list[dict]) -> PromptStatsReport:
    """Statistics over the prompt lengths of all LLM-call events of a run."""
    lengths: list[int] = []
    by_agent: dict[str, list[int]] = {}
    for event in events:
        chars = event.get("prompt_chars")
        if not chars:
            continue
        for n in chars if isinstance(chars, list) else [chars]:
            lengths.append(n)
            by_agent.setdefault(event.get("agent", "unknown"), []).append(n)
    if not lengths:
        raise EmptyRecord("run record contains no prompt events")
    return PromptStatsReport(
        overall=PromptStats.of(lengths),
        per_agent={agent: PromptStats.of(ls) for agent, ls in sorted(by_agent.items())},
    )
