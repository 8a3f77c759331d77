"""Pipeline state: conversation, call accounting, and the structured event log."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import StructuredProblem

AGENT_KINDS = ("formulator", "programmer", "evaluator")


@dataclass
class Task:
    agent: str
    instruction: str
    targets: list[str] = field(default_factory=list)


@dataclass
class Message:
    sender: str  # "manager" or an agent kind
    content: str
    structured_result: dict | None = None


@dataclass
class ManagerDecision:
    done: bool = False
    task: Task | None = None


@dataclass
class PipelineState:
    problem: StructuredProblem
    budget: int = 10
    conversation: list[Message] = field(default_factory=list)
    calls_used: dict[str, int] = field(default_factory=dict)
    event_log: list[dict] = field(default_factory=list)
    last_errors: dict[str, str] = field(default_factory=dict)
    objective: float | None = None
    values: dict[str, float] | None = None
    evaluation_succeeded: bool = False
    technique_done: bool = False

    @property
    def total_calls(self) -> int:
        return sum(self.calls_used.values())

    def count_call(self, agent: str) -> None:
        self.calls_used[agent] = self.calls_used.get(agent, 0) + 1

    def post(self, message: Message) -> None:
        self.conversation.append(message)

    def log_event(
        self,
        agent: str,
        task: str,
        entity_ids: list[str],
        status_changes: list[tuple[str, str, str]],
        prompt_chars: list[int],
        outcome: str,
    ) -> None:
        self.event_log.append(
            {
                "seq": len(self.event_log),
                "agent": agent,
                "task": task,
                "entity_ids": entity_ids,
                "status_changes": [list(ch) for ch in status_changes],
                "prompt_chars": prompt_chars,
                "outcome": outcome,
            }
        )

    def last_evaluation(self) -> dict | None:
        for message in reversed(self.conversation):
            if message.sender == "evaluator" and message.structured_result:
                return message.structured_result
        return None
