"""Command-line entry points: solve, benchmark, inspect, oracle."""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from .agents import run_pipeline
from .amdl.flatmodel import FlatModel, FlatVar, Row
from .amdl.oracle import oracle_solve
from .benchmark import load_dataset, run_benchmark
from .config import PipelineConfig, build_client
from .errors import (
    LpAgentError,
    MalformedInstance,
    OracleScopeExceeded,
    ReplayMiss,
    SolverNotConfigured,
)
from .model import graph_to_dot, problem_to_json
from .preprocess import load_raw_problem

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INSTANCE = 3
EXIT_REPLAY_MISS = 4


def _common_options(fn):
    fn = click.option("--mode", type=click.Choice(["live", "record", "replay"]),
                      default="replay", show_default=True)(fn)
    fn = click.option("--budget", type=int, default=10, show_default=True,
                      help="Maximum agent calls per instance.")(fn)
    fn = click.option("--no-debug", is_flag=True,
                      help="Disable the programmer's code-fixing mode.")(fn)
    fn = click.option("--policy", type=click.Choice(["rule", "llm"]),
                      default="rule", show_default=True)(fn)
    fn = click.option("--code-target", type=click.Choice(["amdl", "script"]),
                      default="amdl", show_default=True)(fn)
    fn = click.option("--keep-artifacts", is_flag=True,
                      help="Keep model/solution files next to the instance.")(fn)
    fn = click.option("--transcripts", default="fixtures/transcripts",
                      show_default=True, help="Transcript store directory.")(fn)
    fn = click.option("--runner-cmd", default="",
                      help="Command for the script-target runner.")(fn)
    fn = click.option("--techniques", is_flag=True,
                      help="Run the structure-recognition pass after formulation.")(fn)
    return fn


def _build_config(mode, budget, no_debug, policy, code_target, keep_artifacts,
                  transcripts, runner_cmd, techniques) -> PipelineConfig:
    return PipelineConfig(
        budget=budget,
        policy=policy,
        techniques=techniques,
        code_target=code_target,
        debug=not no_debug,
        keep_artifacts=keep_artifacts,
        mode=mode,
        transcripts_dir=transcripts,
        runner_cmd=runner_cmd,
    )


@click.group()
def main() -> None:
    """Natural-language optimization problems in, solved MILPs out."""


@main.command()
@click.argument("instance_dir", type=click.Path(exists=True, file_okay=False))
@_common_options
def solve(instance_dir, **flags) -> None:
    """Run the full pipeline on one instance directory."""
    config = _build_config(**flags)
    try:
        llm = build_client(config)
    except (SolverNotConfigured, OSError, ValueError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    try:
        raw = load_raw_problem(instance_dir)
    except (OSError, json.JSONDecodeError, LpAgentError) as exc:
        click.echo(f"cannot load instance: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    try:
        outcome, record = run_pipeline(raw, config, llm)
    except ReplayMiss as exc:
        click.echo(f"replay miss: no transcript for key {exc.key}", err=True)
        sys.exit(EXIT_REPLAY_MISS)
    events_path = Path(instance_dir) / "run.events.jsonl"
    record.write_events(events_path)
    if outcome.kind == "solved":
        click.echo(f"solved: objective {outcome.objective:.6g}")
        for name, value in sorted((outcome.values or {}).items()):
            if value != 0:
                click.echo(f"  {name} = {value:.6g}")
        sys.exit(EXIT_OK)
    click.echo(f"{outcome.kind}: {outcome.reason}", err=True)
    sys.exit(EXIT_INSTANCE)


@main.command()
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--report", "report_path", type=click.Path(dir_okay=False),
              default=None, help="Write the JSON report to this path.")
@click.option("--parallel", type=int, default=1, show_default=True)
@_common_options
def benchmark(dataset_dir, report_path, parallel, **flags) -> None:
    """Evaluate every instance of a dataset and emit a report."""
    config = _build_config(**flags)
    try:
        instances = load_dataset(dataset_dir)
        llm = build_client(config)
    except (MalformedInstance, SolverNotConfigured, ValueError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    if not instances:
        click.echo("dataset contains no instances", err=True)
        sys.exit(EXIT_CONFIG)
    report = run_benchmark(instances, config, parallelism=parallel, llm=llm)
    click.echo(report.to_table(), nl=False)
    if report_path:
        Path(report_path).write_text(report.to_json())
        click.echo(f"report written to {report_path}")
    if report.replay_misses:
        sys.exit(EXIT_REPLAY_MISS)
    sys.exit(EXIT_OK)


@main.command()
@click.argument("instance_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default=".",
              show_default=True, help="Directory for problem.json and graph.dot.")
@_common_options
def inspect(instance_dir, out, **flags) -> None:
    """Preprocess an instance and emit its problem.json and DOT graph."""
    config = _build_config(**flags)
    try:
        llm = build_client(config)
        raw = load_raw_problem(instance_dir)
    except (SolverNotConfigured, OSError, json.JSONDecodeError, ValueError) as exc:
        click.echo(f"configuration error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    from .preprocess import preprocess

    try:
        problem, _report = preprocess(raw, llm, config.prompts_dir)
    except ReplayMiss as exc:
        click.echo(f"replay miss: no transcript for key {exc.key}", err=True)
        sys.exit(EXIT_REPLAY_MISS)
    except LpAgentError as exc:
        click.echo(f"preprocess failed: {exc}", err=True)
        sys.exit(EXIT_INSTANCE)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "problem.json").write_text(problem_to_json(problem))
    (out_dir / "graph.dot").write_text(graph_to_dot(problem))
    click.echo(f"wrote {out_dir / 'problem.json'} and {out_dir / 'graph.dot'}")
    sys.exit(EXIT_OK)


def _lp_to_flatmodel(text: str) -> FlatModel:
    from .tools.lpsolve import LpFormatError, parse_lp

    try:
        parsed = parse_lp(text)
    except LpFormatError as exc:
        raise click.ClickException(str(exc))
    names: list[str] = []
    seen = set()
    for name in parsed["objective"]:
        if name not in seen:
            seen.add(name)
            names.append(name)
    for _name, coeffs, _sense, _rhs in parsed["rows"]:
        for name in coeffs:
            if name not in seen:
                seen.add(name)
                names.append(name)
    for bag in (parsed["bounds"], parsed["integers"], parsed["binaries"]):
        for name in bag:
            if name not in seen:
                seen.add(name)
                names.append(name)
    model = FlatModel(sense=parsed["sense"])
    for name in names:
        if name in parsed["binaries"]:
            domain, lb, ub = "binary", 0.0, 1.0
        elif name in parsed["integers"]:
            domain, lb, ub = "integer", 0.0, math.inf
        else:
            domain, lb, ub = "continuous", 0.0, math.inf
        if name in parsed["bounds"]:
            lb, ub = parsed["bounds"][name]
        model.variables.append(FlatVar(name=name, lb=lb, ub=ub, domain=domain))
    index = {name: i for i, name in enumerate(names)}
    model.c = [parsed["objective"].get(name, 0.0) for name in names]
    model.objective_offset = parsed["obj_const"]
    for row_name, coeffs, sense, rhs in parsed["rows"]:
        model.rows.append(Row(name=row_name,
                              coeffs={index[n]: a for n, a in coeffs.items()},
                              sense=sense, rhs=rhs))
    return model


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
def oracle(model_file) -> None:
    """Solve a small LP-format model with the enumeration oracle."""
    text = Path(model_file).read_text()
    model = _lp_to_flatmodel(text)
    try:
        solution = oracle_solve(model)
    except OracleScopeExceeded as exc:
        click.echo(f"out of oracle scope: {exc}", err=True)
        sys.exit(EXIT_INSTANCE)
    click.echo(f"status: {solution.status}")
    if solution.objective is not None:
        click.echo(f"objective: {solution.objective:.12g}")
        for name, value in sorted(solution.values.items()):
            if value != 0:
                click.echo(f"  {name} = {value:.12g}")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
