from __future__ import annotations

import pytest

from uket_extract.corpus import CaseDocument
from uket_extract.errors import DuplicateTemplateError, UnknownTemplateError
from uket_extract.prompting import (
    ModelConfig,
    PromptRegistry,
    PromptTemplate,
    build_request,
    final_prompt_text,
)


def make_case() -> CaseDocument:
    return CaseDocument(
        case_id="3328920/2017", body_text="JUDGMENT\n\ntext body", page_count=1
    )


class TestShippedPrompt:
    def test_registry_ships_final_template(self):
        registry = PromptRegistry()
        template = registry.get("uket-final", "v1")
        assert template.text.startswith("You are a legal assistant.")

    def test_eight_numbered_items_in_order(self):
        text = final_prompt_text()
        anchors = [
            "1. facts of the case",
            "2. claims made in the specific court decision",
            "3. any references to legal statutes",
            "4. references to precedents",
            "5. general case outcome",
            "6. general case outcome summarised",
            "7. detailed order and remedies",
            "8. essential reasons for the decision",
        ]
        positions = [text.find(anchor) for anchor in anchors]
        assert all(pos >= 0 for pos in positions)
        assert positions == sorted(positions)

    def test_four_labels_and_other_reservation(self):
        text = final_prompt_text()
        for label in (
            "claimant wins",
            "claimant loses",
            "claimant partly wins",
            "other",
        ):
            assert label in text
        assert "reserved for situations in which the result cannot be determined" in text


class TestRegistry:
    def test_list_contains_final_template(self):
        listed = PromptRegistry().list_templates()
        assert ("uket-final", "v1") in {(i, v) for i, v, _ in listed}

    def test_registering_variant_grows_list(self):
        registry = PromptRegistry()
        before = len(registry.list_templates())
        registry.register(
            PromptTemplate(template_id="uket-final", version="v2", text="variant")
        )
        assert len(registry.list_templates()) == before + 1

    def test_duplicate_registration_rejected(self):
        registry = PromptRegistry()
        clone = registry.get("uket-final", "v1")
        with pytest.raises(DuplicateTemplateError):
            registry.register(clone)

    def test_duplicate_across_roots_rejected(self, tmp_path):
        shadow = tmp_path / "uket-final"
        shadow.mkdir()
        (shadow / "v1.txt").write_text("shadow copy", encoding="utf-8")
        with pytest.raises(DuplicateTemplateError):
            PromptRegistry(extra_roots=[tmp_path])

    def test_extra_root_loaded(self, tmp_path):
        variant = tmp_path / "probe"
        variant.mkdir()
        (variant / "v9.txt").write_text("probe text", encoding="utf-8")
        registry = PromptRegistry(extra_roots=[tmp_path])
        assert registry.get("probe", "v9").text == "probe text"


class TestBuildRequest:
    def test_final_template_populates_request(self):
        registry = PromptRegistry()
        request = build_request(registry, "uket-final", "v1", make_case())
        assert request.system_text.startswith("You are a legal assistant.")
        assert request.user_text == make_case().body_text
        assert request.temperature == 0.0
        assert request.model_id == "gpt-4-32k"

    def test_unknown_template_rejected(self):
        with pytest.raises(UnknownTemplateError):
            build_request(PromptRegistry(), "nope", "v1", make_case())

    def test_digest_is_stable(self):
        registry = PromptRegistry()
        a = build_request(registry, "uket-final", "v1", make_case())
        b = build_request(registry, "uket-final", "v1", make_case())
        assert a.digest == b.digest

    def test_digest_varies_with_every_key_field(self):
        registry = PromptRegistry()
        registry.register(
            PromptTemplate(template_id="uket-final", version="v2", text="variant")
        )
        base = build_request(registry, "uket-final", "v1", make_case())
        other_version = build_request(registry, "uket-final", "v2", make_case())
        other_case = build_request(
            registry,
            "uket-final",
            "v1",
            CaseDocument(case_id="1/1", body_text="x", page_count=1),
        )
        other_model = build_request(
            registry, "uket-final", "v1", make_case(), ModelConfig(model_id="gpt-4")
        )
        other_temp = build_request(
            registry, "uket-final", "v1", make_case(), ModelConfig(temperature=0.5)
        )
        digests = {
            base.digest,
            other_version.digest,
            other_case.digest,
            other_model.digest,
            other_temp.digest,
        }
        assert len(digests) == 5

    def test_user_text_byte_equal_to_body(self, fixture_corpus):
        registry = PromptRegistry()
        doc = fixture_corpus[0]
        request = build_request(registry, "uket-final", "v1", doc)
        assert request.user_text == doc.body_text

    def test_messages_layout(self):
        request = build_request(PromptRegistry(), "uket-final", "v1", make_case())
        roles = [m["role"] for m in request.messages()]
        assert roles == ["system", "user"]
