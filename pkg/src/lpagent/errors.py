"""Exception hierarchy shared across the package."""

from __future__ import annotations


class LpAgentError(Exception):
    """Base class for all package errors."""


# --- model ---

class MalformedSymbol(LpAgentError):
    pass


class DuplicateSymbol(LpAgentError):
    pass


class DuplicateObjective(LpAgentError):
    pass


class UnknownClause(LpAgentError):
    pass


class UnknownSymbol(LpAgentError):
    pass


class InvalidTransition(LpAgentError):
    def __init__(self, entity_id: str, current: str, target: str):
        super().__init__(f"{entity_id}: illegal status transition {current} -> {target}")
        self.entity_id = entity_id
        self.current = current
        self.target = target


class DataShapeMismatch(LpAgentError):
    pass


# --- llm client ---

class MalformedLLMOutput(LpAgentError):
    pass


class ReplayMiss(LpAgentError):
    def __init__(self, key: str, template: str | None = None):
        hint = f" (template: {template})" if template else ""
        super().__init__(f"no transcript recorded for request {key}{hint}")
        self.key = key
        self.template = template


class TransportError(LpAgentError):
    pass


class ProviderError(LpAgentError):
    def __init__(self, status: int, body: str = ""):
        super().__init__(f"provider returned status {status}: {body[:200]}")
        self.status = status


class UnboundPlaceholder(LpAgentError):
    pass


class StoreCollision(LpAgentError):
    pass


class EmptyRecord(LpAgentError):
    pass


# --- preprocessing / agents ---

class MissingObjective(LpAgentError):
    pass


class UnknownSymbolDeclared(LpAgentError):
    pass


class BudgetExhausted(LpAgentError):
    pass


class TargetMismatch(LpAgentError):
    pass


# --- amdl ---

class AmdlSyntaxError(LpAgentError):
    def __init__(self, line: int, col: int, expected: str, found: str = ""):
        msg = f"line {line}, col {col}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.line = line
        self.col = col
        self.expected = expected


class NonlinearTerm(LpAgentError):
    pass


class UnboundDimension(LpAgentError):
    pass


class IndexOutOfRange(LpAgentError):
    pass


class UnrepresentableStructure(LpAgentError):
    pass


class UnparseableSolution(LpAgentError):
    pass


class UnknownVariableName(LpAgentError):
    pass


class OracleScopeExceeded(LpAgentError):
    pass


# --- execution ---

class SolverNotConfigured(LpAgentError):
    pass


class SolverCrashed(LpAgentError):
    def __init__(self, exit_code: int, stderr: str = ""):
        super().__init__(f"solver exited with code {exit_code}: {stderr[:300]}")
        self.exit_code = exit_code
        self.stderr = stderr


class RunnerUnavailable(LpAgentError):
    pass


class ProtocolError(LpAgentError):
    pass


class ScriptExhausted(LpAgentError):
    pass


class BackendUnavailable(LpAgentError):
    pass


# --- benchmark ---

class MalformedInstance(LpAgentError):
    def __init__(self, instance_id: str, reason: str):
        super().__init__(f"instance {instance_id}: {reason}")
        self.instance_id = instance_id
        self.reason = reason
