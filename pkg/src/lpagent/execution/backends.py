"""Execution backends: turn an ExecutionJob into an ExecutionResult.

Error attribution is first-error-wins in canonical entity order (variables in
declaration order, then objective, then constraints by id), so repeated runs
over the same broken job always flag the same entity.
"""

from __future__ import annotations

import json
import re
import shlex
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import (
    LpAgentError,
    ProtocolError,
    RunnerUnavailable,
    SolverCrashed,
    SolverNotConfigured,
)
from ..amdl import emit_lp, expand, parse_amdl, parse_solution
from ..amdl.ast import VarDecl
from ..model import DataBundle

DEFAULT_WALL_SECONDS = 30.0
DEFAULT_MEMORY_MB = 2048
PROTOCOL_VERSION = 1

_CLAUSE_ID_RE = re.compile(r"^c(\d+)$")


@dataclass
class Limits:
    wall_seconds: float = DEFAULT_WALL_SECONDS
    memory_mb: int = DEFAULT_MEMORY_MB


@dataclass
class ExecutionJob:
    data: DataBundle
    variable_snippets: dict[str, str] = field(default_factory=dict)
    clause_snippets: dict[str, str] = field(default_factory=dict)
    code_target: str = "amdl"
    limits: Limits = field(default_factory=Limits)


@dataclass
class ExecutionResult:
    status: str  # optimal | infeasible | unbounded | error | timeout
    objective: float | None = None
    values: dict[str, float] | None = None
    error: dict[str, str] | None = None  # {entity_id, message, detail}


def _clause_sort_key(clause_id: str) -> tuple[int, int, str]:
    if clause_id == "obj":
        return (0, 0, clause_id)
    m = _CLAUSE_ID_RE.match(clause_id)
    if m:
        return (1, int(m.group(1)), clause_id)
    return (2, 0, clause_id)


def canonical_entity_order(job: ExecutionJob) -> list[tuple[str, str]]:
    """(entity id, snippet) pairs in deterministic attribution order."""
    pairs = list(job.variable_snippets.items())
    pairs += sorted(job.clause_snippets.items(), key=lambda kv: _clause_sort_key(kv[0]))
    return pairs


def default_solver_cmd() -> str:
    return f"{sys.executable} -m lpagent.tools.lpsolve {{lp_path}} {{sol_path}}"


def execute_lp(
    job: ExecutionJob,
    solver_cmd: str | None = None,
    solution_dialect: str = "A",
    keep_artifacts: bool = False,
    artifacts_dir: str | Path | None = None,
) -> ExecutionResult:
    if job.code_target != "amdl":
        raise SolverNotConfigured(f"lp backend cannot run code target {job.code_target!r}")
    solver_cmd = solver_cmd or default_solver_cmd()
    statements = []
    var_symbols = set(job.variable_snippets)
    for entity_id, snippet in canonical_entity_order(job):
        try:
            stmt = parse_amdl(snippet, var_symbols=var_symbols)
        except LpAgentError as exc:
            return ExecutionResult(
                status="error",
                error={"entity_id": entity_id, "message": type(exc).__name__,
                       "detail": str(exc)},
            )
        if entity_id in job.variable_snippets and not isinstance(stmt, VarDecl):
            return ExecutionResult(
                status="error",
                error={"entity_id": entity_id, "message": "TargetMismatch",
                       "detail": "variable snippet is not a var declaration"},
            )
        statements.append((entity_id, stmt))
    try:
        model = expand(statements, job.data)
        lp_text = emit_lp(model)
    except LpAgentError as exc:
        entity_id = getattr(exc, "entity_id", "")
        return ExecutionResult(
            status="error",
            error={"entity_id": entity_id, "message": type(exc).__name__,
                   "detail": str(exc)},
        )
    with tempfile.TemporaryDirectory(prefix="lpagent-") as tmp:
        workdir = Path(tmp)
        lp_path = workdir / "model.lp"
        sol_path = workdir / "model.sol"
        lp_path.write_text(lp_text)
        cmd = shlex.split(solver_cmd.format(lp_path=lp_path, sol_path=sol_path))
        try:
            proc = subprocess.run(
                cmd, capture_output=True, text=True, timeout=job.limits.wall_seconds
            )
        except subprocess.TimeoutExpired:
            return ExecutionResult(status="timeout")
        except FileNotFoundError as exc:
            raise SolverNotConfigured(f"solver command not found: {cmd[0]}") from exc
        if keep_artifacts and artifacts_dir is not None:
            dest = Path(artifacts_dir)
            dest.mkdir(parents=True, exist_ok=True)
            (dest / "model.lp").write_text(lp_text)
            if sol_path.exists():
                (dest / "model.sol").write_text(sol_path.read_text())
        if proc.returncode != 0:
            raise SolverCrashed(proc.returncode, proc.stderr)
        solution = parse_solution(sol_path.read_text(), model, dialect=solution_dialect)
    if solution.status != "optimal":
        return ExecutionResult(status=solution.status)
    return ExecutionResult(status="optimal", objective=solution.objective,
                           values=solution.values)


def execute_script(job: ExecutionJob, runner_cmd: str) -> ExecutionResult:
    if not runner_cmd:
        raise RunnerUnavailable(
            "no runner configured; build the script runner and set runner_cmd"
        )
    payload = {
        "protocol": PROTOCOL_VERSION,
        "data": {"dimensions": job.data.dimensions, "values": job.data.values},
        "variable_snippets": job.variable_snippets,
        "clause_snippets": job.clause_snippets,
        "limits": {"wall_seconds": job.limits.wall_seconds,
                   "memory_mb": job.limits.memory_mb},
    }
    cmd = shlex.split(runner_cmd) + ["--job", "-"]
    try:
        proc = subprocess.run(
            cmd,
            input=json.dumps(payload),
            capture_output=True,
            text=True,
            timeout=job.limits.wall_seconds + 5.0,
        )
    except FileNotFoundError as exc:
        raise RunnerUnavailable(
            f"runner command not found: {cmd[0]} (build it with `npm run build` "
            f"in runner/)"
        ) from exc
    except subprocess.TimeoutExpired:
        return ExecutionResult(status="timeout")
    if proc.returncode != 0:
        raise ProtocolError(
            f"runner exited with code {proc.returncode}: {proc.stderr[:300]}"
        )
    try:
        doc = json.loads(proc.stdout)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"runner emitted malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("protocol") != PROTOCOL_VERSION:
        raise ProtocolError("runner response missing protocol handshake")
    status = doc.get("status")
    if status not in ("optimal", "infeasible", "unbounded", "error", "timeout"):
        raise ProtocolError(f"runner reported unknown status {status!r}")
    return ExecutionResult(
        status=status,
        objective=doc.get("objective"),
        values=doc.get("values"),
        error=doc.get("error"),
    )


class MockBackend:
    """Scripted backend for tests: returns canned results, records jobs."""

    def __init__(self, script: list[ExecutionResult]):
        if not script:
            raise ValueError("mock backend needs a non-empty script")
        self.script = list(script)
        self.jobs: list[ExecutionJob] = []

    def __call__(self, job: ExecutionJob) -> ExecutionResult:
        from ..errors import ScriptExhausted

        self.jobs.append(job)
        if not self.script:
            raise ScriptExhausted("mock backend script exhausted")
        return self.script.pop(0)
