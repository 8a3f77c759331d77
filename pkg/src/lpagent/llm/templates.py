"""Prompt templates with `{{placeholder}}` slots, loaded from prompts/*.txt."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import UnboundPlaceholder

_PLACEHOLDER_RE = re.compile(r"\{\{([A-Za-z_][A-Za-z0-9_]*)\}\}")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str

    def placeholders(self) -> list[str]:
        seen: list[str] = []
        for m in _PLACEHOLDER_RE.finditer(self.body):
            if m.group(1) not in seen:
                seen.append(m.group(1))
        return seen

    def render(self, **bindings: str) -> str:
        missing = [p for p in self.placeholders() if p not in bindings]
        if missing:
            raise UnboundPlaceholder(f"{self.name}: unbound placeholders {missing}")
        out = _PLACEHOLDER_RE.sub(lambda m: str(bindings[m.group(1)]), self.body)
        leftover = _PLACEHOLDER_RE.search(out)
        if leftover:
            raise UnboundPlaceholder(
                f"{self.name}: rendering reintroduced placeholder {leftover.group(1)}"
            )
        return out


def render(template: PromptTemplate, bindings: dict[str, str]) -> str:
    return template.render(**bindings)


def load_template(name: str, prompts_dir: str | Path | None = None) -> PromptTemplate:
    """Load `<name>.txt` from a directory, defaulting to the packaged prompts."""
    if prompts_dir is not None:
        body = (Path(prompts_dir) / f"{name}.txt").read_text()
    else:
        body = resources.files("lpagent.prompts").joinpath(f"{name}.txt").read_text()
    return PromptTemplate(name=name, body=body)
