import json

import pytest

from conftest import INSTANCES, TRANSCRIPTS, scripted_client
from lpagent.agents import replay_status_changes, run_pipeline
from lpagent.config import PipelineConfig
from lpagent.errors import ReplayMiss
from lpagent.llm import LlmClient, TranscriptStore
from lpagent.preprocess import RawProblem, load_raw_problem


def replay_config(**kw):
    return PipelineConfig(mode="replay", transcripts_dir=str(TRANSCRIPTS), **kw)


def replay_client():
    return LlmClient(mode="replay", store=TranscriptStore(TRANSCRIPTS))


def run_fixture(name, **kw):
    raw = load_raw_problem(INSTANCES / name)
    return run_pipeline(raw, replay_config(**kw), replay_client())


def test_solves_fixture():
    outcome, record = run_fixture("lp1_furniture")
    assert outcome.kind == "solved"
    assert outcome.objective == pytest.approx(6.4)
    assert record.calls_used == {"formulator": 1, "programmer": 1, "evaluator": 1}


def test_repair_fixture_event_sequence():
    outcome, record = run_fixture("milp2_production")
    assert outcome.kind == "solved"
    assert outcome.objective == pytest.approx(24.0)
    dispatches = [e["outcome"].split(":", 1)[1] for e in record.events
                  if e["agent"] == "manager" and e["outcome"].startswith("dispatch")]
    assert dispatches == ["formulator", "programmer", "evaluator",
                          "programmer", "evaluator"]
    finals = replay_status_changes(record.events)
    assert finals["c1"] == "validated"


def test_failing_fixture_exhausts_budget():
    outcome, record = run_fixture("fail1_postings")
    assert outcome.kind == "budget_exhausted"
    assert sum(record.calls_used.values()) == 10


def test_budget_is_hard_cap():
    for budget in (3, 5, 10):
        outcome, record = run_fixture("fail1_postings", budget=budget)
        assert outcome.kind == "budget_exhausted"
        assert sum(record.calls_used.values()) == budget


def test_replay_miss_propagates(tmp_path):
    raw = load_raw_problem(INSTANCES / "lp1_furniture")
    empty = LlmClient(mode="replay", store=TranscriptStore(tmp_path))
    with pytest.raises(ReplayMiss):
        run_pipeline(raw, replay_config(), empty)


def test_preprocess_failure_is_failed_outcome():
    client = scripted_client(["garbage"] * 3)
    raw = RawProblem(description="impossible to parse", data=None)
    outcome, record = run_pipeline(raw, PipelineConfig(mode="live"), client)
    assert outcome.kind == "failed"
    assert outcome.reason.startswith("preprocess")
    assert record.problem is None


def test_event_log_jsonl(tmp_path):
    _outcome, record = run_fixture("lp1_furniture")
    path = tmp_path / "run.events.jsonl"
    record.write_events(path)
    lines = path.read_text().splitlines()
    assert len(lines) == len(record.events)
    for line in lines:
        event = json.loads(line)
        assert {"seq", "agent", "outcome"} <= set(event)


def test_adversarial_manager_halts_at_budget():
    """A manager that never says Done terminates at exactly the budget."""
    decision = ("```json\n" + json.dumps(
        {"decision": "dispatch", "agent": "evaluator", "instruction": "again",
         "targets": []}) + "\n```")
    for budget in (3, 5, 10):
        raw = load_raw_problem(INSTANCES / "lp1_furniture")
        store = TranscriptStore(TRANSCRIPTS)

        def transport(request, _d=decision):
            return __import__("lpagent.llm", fromlist=["ChatResponse"]) \
                .ChatResponse(content=_d, usage={})

        # replay for agent prompts is impossible here: the llm policy consults
        # the same client, so run live with a transport that replays the
        # recorded agent responses and scripts the manager
        client = _hybrid_client(transport)
        config = PipelineConfig(mode="replay", policy="llm", budget=budget,
                                transcripts_dir=str(TRANSCRIPTS))
        outcome, record = run_pipeline(raw, config, client)
        assert outcome.kind in ("budget_exhausted", "solved")
        assert sum(record.calls_used.values()) == budget


def _hybrid_client(manager_transport):
    """Replay client that answers manager prompts from a script instead."""
    from lpagent.llm import ChatResponse

    store = TranscriptStore(TRANSCRIPTS)
    base = LlmClient(mode="replay", store=store)

    class Hybrid(LlmClient):
        def __init__(self):
            super().__init__(mode="replay", store=store)

        def complete(self, request, template=None):
            if template == "manager":
                return manager_transport(request)
            return base.complete(request, template)

    return Hybrid()
