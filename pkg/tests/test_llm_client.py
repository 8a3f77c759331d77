import json

import pytest

from conftest import dead_transport
from lpagent.errors import ReplayMiss, StoreCollision
from lpagent.llm import ChatRequest, ChatResponse, LlmClient, TranscriptStore


def request(text="hello"):
    return ChatRequest(model="m", messages=(("user", text),))


def test_key_is_stable_and_content_based():
    a, b = request("same"), request("same")
    assert a.key == b.key
    assert a.key != request("different").key
    assert len(a.key) == 64  # sha256 hex


def test_key_ignores_max_tokens():
    a = ChatRequest(model="m", messages=(("user", "x"),), max_tokens=100)
    b = ChatRequest(model="m", messages=(("user", "x"),), max_tokens=200)
    assert a.key == b.key


def test_normalized_is_canonical_json():
    doc = json.loads(request().normalized())
    assert doc["model"] == "m"


def test_store_round_trip(tmp_path):
    store = TranscriptStore(tmp_path)
    req = request()
    store.put(req, ChatResponse(content="answer", usage={"total_tokens": 3}))
    entry = store.get(req.key)
    assert entry["response"] == "answer"
    assert (tmp_path / f"{req.key}.json").exists()


def test_store_idempotent_and_collision(tmp_path):
    store = TranscriptStore(tmp_path)
    req = request()
    store.put(req, ChatResponse(content="answer", usage={}))
    store.put(req, ChatResponse(content="answer", usage={}))  # same content ok
    with pytest.raises(StoreCollision):
        store.put(req, ChatResponse(content="other", usage={}))


def test_replay_mode_no_network(tmp_path):
    store = TranscriptStore(tmp_path)
    req = request()
    store.put(req, ChatResponse(content="from the store", usage={}))
    client = LlmClient(mode="replay", store=store, transport=dead_transport)
    assert client.complete(req).content == "from the store"


def test_replay_miss(tmp_path):
    client = LlmClient(mode="replay", store=TranscriptStore(tmp_path))
    with pytest.raises(ReplayMiss) as exc:
        client.complete(request(), template="formulation")
    assert exc.value.key == request().key
    assert exc.value.template == "formulation"


def test_record_mode_persists(tmp_path):
    store = TranscriptStore(tmp_path)

    def transport(req):
        return ChatResponse(content="live answer", usage={})

    client = LlmClient(mode="record", store=store, transport=transport)
    client.complete(request())
    replay = LlmClient(mode="replay", store=store)
    assert replay.complete(request()).content == "live answer"


def test_chat_wraps_messages(tmp_path):
    seen = {}

    def transport(req):
        seen["messages"] = req.messages
        return ChatResponse(content="ok", usage={})

    client = LlmClient(mode="live", transport=transport)
    client.chat("prompt text", system="sys text")
    assert seen["messages"] == (("system", "sys text"), ("user", "prompt text"))


def test_request_validation():
    with pytest.raises(ValueError):
        ChatRequest(model="", messages=(("user", "x"),))
    with pytest.raises(ValueError):
        ChatRequest(model="m", messages=())
    with pytest.raises(ValueError):
        ChatRequest(model="m", messages=(("narrator", "x"),))
