"""Versioned registry of extraction prompts and per-case request building.

Templates live on disk as ``prompts/<template_id>/<version>.txt``. The
package ships ``uket-final/v1``, the production extraction prompt; extra
registry roots can layer user-supplied variants on top.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterator

from .corpus import CaseDocument
from .errors import DuplicateTemplateError, InvalidDocumentError, UnknownTemplateError

FINAL_TEMPLATE_ID = "uket-final"
FINAL_TEMPLATE_VERSION = "v1"

DEFAULT_MODEL_ID = "gpt-4-32k"
DEFAULT_TEMPERATURE = 0.0
DEFAULT_MAX_OUTPUT_TOKENS = 4096


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    version: str
    text: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError(f"{self.key}: template text must be non-empty")

    @property
    def key(self) -> str:
        return f"{self.template_id}/{self.version}"

    @property
    def summary(self) -> str:
        first_line = self.text.strip().splitlines()[0]
        return first_line if len(first_line) <= 80 else first_line[:77] + "..."


@dataclass(frozen=True)
class ModelConfig:
    model_id: str = DEFAULT_MODEL_ID
    temperature: float = DEFAULT_TEMPERATURE
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class ChatRequest:
    """A fully-populated chat request, keyed for replay by its digest."""

    template_id: str
    template_version: str
    case_id: str
    system_text: str
    user_text: str
    model_id: str
    temperature: float
    max_output_tokens: int

    @property
    def digest(self) -> str:
        """Stable replay key over everything that identifies the request."""
        payload = json.dumps(
            {
                "template_id": self.template_id,
                "version": self.template_version,
                "case_id": self.case_id,
                "model_id": self.model_id,
                "temperature": self.temperature,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def messages(self) -> list[dict[str, str]]:
        return [
            {"role": "system", "content": self.system_text},
            {"role": "user", "content": self.user_text},
        ]


def _packaged_root() -> Path:
    return Path(str(resources.files("uket_extract") / "prompts"))


class PromptRegistry:
    """Read-mostly template store; registration is serialized."""

    def __init__(self, extra_roots: list[Path] | None = None) -> None:
        self._lock = threading.Lock()
        self._templates: dict[tuple[str, str], PromptTemplate] = {}
        for root in [_packaged_root(), *(extra_roots or [])]:
            self._load_root(Path(root))

    def _load_root(self, root: Path) -> None:
        if not root.is_dir():
            return
        for text_path in sorted(root.glob("*/*.txt")):
            template = PromptTemplate(
                template_id=text_path.parent.name,
                version=text_path.stem,
                text=text_path.read_text(encoding="utf-8"),
            )
            self._add(template)

    def _add(self, template: PromptTemplate) -> None:
        key = (template.template_id, template.version)
        if key in self._templates:
            raise DuplicateTemplateError(f"duplicate template: {template.key}")
        self._templates[key] = template

    def register(self, template: PromptTemplate) -> None:
        with self._lock:
            self._add(template)

    def get(self, template_id: str, version: str) -> PromptTemplate:
        try:
            return self._templates[(template_id, version)]
        except KeyError:
            raise UnknownTemplateError(
                f"unknown template: {template_id}/{version}"
            ) from None

    def list_templates(self) -> list[tuple[str, str, str]]:
        return [
            (t.template_id, t.version, t.summary)
            for t in sorted(
                self._templates.values(), key=lambda t: (t.template_id, t.version)
            )
        ]

    def __iter__(self) -> Iterator[PromptTemplate]:
        return iter(self._templates.values())


def final_prompt_text() -> str:
    """The shipped production extraction prompt."""
    return PromptRegistry().get(FINAL_TEMPLATE_ID, FINAL_TEMPLATE_VERSION).text


def build_request(
    registry: PromptRegistry,
    template_id: str,
    version: str,
    case: CaseDocument,
    model_config: ModelConfig | None = None,
) -> ChatRequest:
    """Assemble the chat request for one case.

    The system message is the template text and the user message is the
    transcript, both passed through byte-for-byte.
    """
    template = registry.get(template_id, version)
    if not case.body_text:
        raise InvalidDocumentError(f"{case.case_id}: empty case body")
    config = model_config or ModelConfig()
    return ChatRequest(
        template_id=template.template_id,
        template_version=template.version,
        case_id=case.case_id,
        system_text=template.text,
        user_text=case.body_text,
        model_id=config.model_id,
        temperature=config.temperature,
        max_output_tokens=config.max_output_tokens,
    )
