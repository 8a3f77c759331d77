from .backends import (
    ExecutionJob,
    ExecutionResult,
    Limits,
    MockBackend,
    canonical_entity_order,
    execute_lp,
    execute_script,
)

__all__ = [
    "ExecutionJob",
    "ExecutionResult",
    "Limits",
    "MockBackend",
    "canonical_entity_order",
    "execute_lp",
    "execute_script",
]
