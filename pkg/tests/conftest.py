import itertools
from pathlib import Path

import pytest

from lpagent.llm import ChatResponse, LlmClient, TranscriptStore
from lpagent.model import Clause, DataBundle, Parameter, StructuredProblem, Variable

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
TRANSCRIPTS = FIXTURES / "transcripts"
INSTANCES = FIXTURES / "instances"


@pytest.fixture
def replay_client() -> LlmClient:
    return LlmClient(mode="replay", store=TranscriptStore(TRANSCRIPTS))


def scripted_client(responses: list[str]) -> LlmClient:
    """Client whose transport pops canned responses in FIFO order."""
    queue = iter(responses)

    def transport(request):
        try:
            return ChatResponse(content=next(queue), usage={})
        except StopIteration:
            raise AssertionError("scripted client ran out of responses")

    return LlmClient(mode="live", transport=transport)


def dead_transport(request):
    raise AssertionError("transport must not be used in replay mode")


def factory_problem() -> StructuredProblem:
    """Small formulated problem shared by agent and context tests."""
    p = StructuredProblem(background="A workshop builds two products.")
    p.add_entity(Parameter("Profit", ["Products"], "profit per unit"))
    p.add_entity(Parameter("Hours", ["Machines", "Products"], "hours per unit"))
    p.add_entity(Parameter("Capacity", ["Machines"], "hours available"))
    p.add_entity(Clause(id="obj", kind="objective",
                        description="maximize total profit"))
    p.add_entity(Clause(id="c1", kind="constraint",
                        description="respect machine capacity"))
    p.add_entity(Variable("make", ["Products"], "continuous", "units to build"))
    p.replace_edges("obj", ["Profit", "make"])
    p.replace_edges("c1", ["Hours", "Capacity", "make"])
    p.data = DataBundle({"Products": 2, "Machines": 2},
                        {"Profit": [3, 2], "Hours": [[1, 2], [3, 1]],
                         "Capacity": [4, 5]})
    return p
