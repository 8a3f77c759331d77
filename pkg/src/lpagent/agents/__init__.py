from .evaluator import build_job, evaluate
from .formulator import CHEATSHEETS, formulate, technique_pass
from .manager import manager_step, rule_based_decision, status_summary
from .pipeline import Outcome, RunRecord, replay_status_changes, run_pipeline
from .programmer import program
from .state import (
    AGENT_KINDS,
    ManagerDecision,
    Message,
    PipelineState,
    Task,
)

__all__ = [
    "AGENT_KINDS",
    "CHEATSHEETS",
    "ManagerDecision",
    "Message",
    "Outcome",
    "PipelineState",
    "RunRecord",
    "Task",
    "build_job",
    "evaluate",
    "formulate",
    "manager_step",
    "program",
    "replay_status_changes",
    "rule_based_decision",
    "run_pipeline",
    "status_summary",
    "technique_pass",
]
