import pytest

from lpagent.errors import MalformedLLMOutput, UnboundPlaceholder
from lpagent.llm import PromptTemplate, extract_json_block, load_template
from lpagent.llm.parsing import CORRECTIVE_NOTE


def test_placeholders():
    t = PromptTemplate("t", "a {{x}} b {{y}} c {{x}}")
    assert t.placeholders() == ["x", "y"]


def test_render():
    t = PromptTemplate("t", "hello {{name}}")
    assert t.render(name="world") == "hello world"


def test_unbound_placeholder():
    t = PromptTemplate("t", "hello {{name}}")
    with pytest.raises(UnboundPlaceholder):
        t.render()


def test_reintroduced_placeholder_rejected():
    t = PromptTemplate("t", "value: {{x}}")
    with pytest.raises(UnboundPlaceholder):
        t.render(x="sneaky {{y}}")


def test_load_packaged_templates():
    for name in ("preprocess_params", "preprocess_segment", "preprocess_filter",
                 "manager", "formulation", "formulation_fix", "clause_coding",
                 "variable_coding", "debugging", "technique"):
        template = load_template(name)
        assert template.placeholders()


def test_load_from_directory(tmp_path):
    (tmp_path / "custom.txt").write_text("say {{word}}")
    t = load_template("custom", tmp_path)
    assert t.render(word="hi") == "say hi"


def test_extract_json_block():
    doc = extract_json_block("preamble\n```json\n{\"a\": 1}\n```\ntrailer")
    assert doc == {"a": 1}


@pytest.mark.parametrize("content", [
    "no block at all",
    "```json\n{\"a\": 1}\n```\n```json\n{\"b\": 2}\n```",  # two blocks
    "```json\nnot json\n```",
    "```json\n[1, 2]\n```",  # not an object
])
def test_extract_json_block_rejects(content):
    with pytest.raises(MalformedLLMOutput):
        extract_json_block(content)


def test_corrective_note_mentions_format():
    assert "json" in CORRECTIVE_NOTE.lower()
