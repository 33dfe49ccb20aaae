"""Leakage-guarded export of outcome-prediction examples.

An example pairs a record's facts and claims with its outcome label. Text
from the reasons, general-outcome and order-remedies sections must never
reach the inputs: any sentence from those sections found verbatim inside
the facts or claims disqualifies the case.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DanglingReferenceError, EmptyExportError
from .extraction import ExtractionRecord, OutcomeLabel
from .quality import EligibilityClass, QualityAnnotation, derive_eligibility

logger = logging.getLogger(__name__)

# Sections whose text may reveal the outcome.
GUARDED_SECTIONS = ("reasons", "general_outcome", "order_remedies")

# Sentences shorter than this are boilerplate, not leakage.
MIN_LEAK_SENTENCE_CHARS = 25

_SENTENCE_SPLIT = re.compile(r"[.!?]")

POLICIES: dict[str, frozenset[EligibilityClass]] = {
    "procedural-inclusive": frozenset(
        {EligibilityClass.PROCEDURAL_ONLY, EligibilityClass.SUBSTANTIVE}
    ),
    "substantive-only": frozenset({EligibilityClass.SUBSTANTIVE}),
}


@dataclass(frozen=True)
class PredictionExample:
    case_id: str
    input_facts: str
    input_claims: str
    target_label: OutcomeLabel
    eligibility: EligibilityClass

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "input_facts": self.input_facts,
            "input_claims": self.input_claims,
            "target_label": self.target_label.value,
            "eligibility": self.eligibility.value,
        }


def _qualifying_sentences(text: str) -> list[str]:
    sentences = []
    for chunk in _SENTENCE_SPLIT.split(text):
        sentence = chunk.strip()
        if len(sentence) >= MIN_LEAK_SENTENCE_CHARS:
            sentences.append(sentence)
    return sentences


def leakage_check(record: ExtractionRecord) -> list[str]:
    """Outcome-bearing sentences that reappear verbatim in facts or claims.

    Splits the guarded sections into terminator-delimited sentences, keeps
    those of at least 25 characters after trimming, and reports every one
    found inside the facts or claims text. Empty result means clean.
    """
    offenders: list[str] = []
    haystacks = (record.facts, record.claims)
    for section in GUARDED_SECTIONS:
        for sentence in _qualifying_sentences(getattr(record, section)):
            if any(sentence in haystack for haystack in haystacks):
                if sentence not in offenders:
                    offenders.append(sentence)
    return offenders


def select_examples(
    records: Mapping[str, ExtractionRecord],
    annotations: Iterable[QualityAnnotation],
    policy: str,
) -> tuple[list[PredictionExample], dict[str, str]]:
    """Pick and guard the exportable examples for a policy.

    Returns the examples sorted by case id plus a map of skipped case ids
    to the skip reason.
    """
    wanted = POLICIES.get(policy)
    if wanted is None:
        raise ValueError(f"unknown policy: {policy}")
    examples: list[PredictionExample] = []
    skipped: dict[str, str] = {}
    for annotation in sorted(annotations, key=lambda a: a.case_id):
        eligibility = derive_eligibility(annotation)
        if eligibility not in wanted:
            continue
        record = records.get(annotation.case_id)
        if record is None:
            raise DanglingReferenceError(
                f"no extraction record for {annotation.case_id}"
            )
        offenders = leakage_check(record)
        if offenders:
            skipped[annotation.case_id] = "leakage-guard"
            logger.warning(
                "%s skipped: leakage-guard (%d overlapping sentence(s))",
                annotation.case_id,
                len(offenders),
            )
            continue
        examples.append(
            PredictionExample(
                case_id=record.case_id,
                input_facts=record.facts,
                input_claims=record.claims,
                target_label=record.outcome_label,
                eligibility=eligibility,
            )
        )
    return examples, skipped


def export(
    records: Mapping[str, ExtractionRecord],
    annotations: Iterable[QualityAnnotation],
    policy: str,
    out_path: str | Path,
) -> dict:
    """Write the JSONL dataset and its manifest; returns the manifest.

    Output is deterministic: examples sorted by case id, one JSON object
    per line, manifest written next to the dataset as ``<name>.manifest.json``.
    """
    examples, skipped = select_examples(records, annotations, policy)
    if not examples:
        raise EmptyExportError(f"policy {policy} selected no exportable cases")
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8") as handle:
        for example in examples:
            handle.write(json.dumps(example.to_dict(), ensure_ascii=False) + "\n")
    label_counts: dict[str, int] = {}
    class_counts: dict[str, int] = {}
    for example in examples:
        label_counts[example.target_label.value] = (
            label_counts.get(example.target_label.value, 0) + 1
        )
        class_counts[example.eligibility.value] = (
            class_counts.get(example.eligibility.value, 0) + 1
        )
    manifest = {
        "policy": policy,
        "examples": len(examples),
        "labels": dict(sorted(label_counts.items())),
        "eligibility": dict(sorted(class_counts.items())),
        "skipped": dict(sorted(skipped.items())),
    }
    manifest_path = out.with_name(out.stem + ".manifest.json")
    manifest_path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return manifest
