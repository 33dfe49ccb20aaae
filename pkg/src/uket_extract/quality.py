"""Two-part human quality-check annotations: validation, storage, eligibility.

Part 1 scores each of the eight extracted sections 0 or 1 for accuracy.
Part 2 attaches two numbers: whether the case is suitable for an outcome
prediction task at all, and, only for suitable cases, whether its facts
are dominated by procedural events.
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .corpus import safe_filename
from .errors import AnnotationConflictError, InvalidAnnotationError
from .extraction import ASPECTS


@dataclass(frozen=True)
class AspectScore:
    aspect: str
    score: int  # 0 | 1


@dataclass(frozen=True)
class QualityAnnotation:
    case_id: str
    part1: tuple[AspectScore, ...]
    part2_suitable: int  # 0 | 1
    part2_procedural: int | None = None  # present only when suitable
    annotator_id: str = ""
    annotated_at: str = ""
    notes: str = ""

    def score_for(self, aspect: str) -> int:
        for entry in self.part1:
            if entry.aspect == aspect:
                return entry.score
        raise KeyError(aspect)


class EligibilityClass(enum.Enum):
    NOT_PREDICTABLE = "not-predictable"
    PROCEDURAL_ONLY = "procedural-only"
    SUBSTANTIVE = "substantive"


def validate_annotation(annotation: QualityAnnotation) -> list[str]:
    """Check the rubric invariants; returns violations, empty when ok."""
    violations: list[str] = []
    if not annotation.case_id:
        violations.append("case_id must be non-empty")
    seen: set[str] = set()
    for entry in annotation.part1:
        if entry.aspect not in ASPECTS:
            violations.append(f"unknown aspect: {entry.aspect}")
            continue
        if entry.aspect in seen:
            violations.append(f"duplicate aspect: {entry.aspect}")
        seen.add(entry.aspect)
        if entry.score not in (0, 1):
            violations.append(f"non-binary score for {entry.aspect}: {entry.score}")
    for aspect in ASPECTS:
        if aspect not in seen:
            violations.append(f"missing aspect: {aspect}")
    if annotation.part2_suitable not in (0, 1):
        violations.append(f"part2_suitable must be 0 or 1: {annotation.part2_suitable}")
    if annotation.part2_suitable == 1:
        if annotation.part2_procedural is None:
            violations.append("part2_procedural required when part2_suitable = 1")
        elif annotation.part2_procedural not in (0, 1):
            violations.append(
                f"part2_procedural must be 0 or 1: {annotation.part2_procedural}"
            )
    elif annotation.part2_procedural is not None:
        violations.append("part2_procedural present while part2_suitable = 0")
    return violations


def derive_eligibility(annotation: QualityAnnotation) -> EligibilityClass:
    """Map the two part-2 numbers onto the prediction-eligibility class."""
    violations = validate_annotation(annotation)
    if violations:
        raise InvalidAnnotationError(violations)
    if annotation.part2_suitable == 0:
        return EligibilityClass.NOT_PREDICTABLE
    if annotation.part2_procedural == 1:
        return EligibilityClass.PROCEDURAL_ONLY
    return EligibilityClass.SUBSTANTIVE


def annotation_to_dict(annotation: QualityAnnotation) -> dict[str, Any]:
    data: dict[str, Any] = {
        "case_id": annotation.case_id,
        "part1": {entry.aspect: entry.score for entry in annotation.part1},
        "part2_suitable": annotation.part2_suitable,
        "annotator_id": annotation.annotator_id,
        "annotated_at": annotation.annotated_at,
        "notes": annotation.notes,
    }
    if annotation.part2_procedural is not None:
        data["part2_procedural"] = annotation.part2_procedural
    return data


def annotation_from_dict(data: Mapping[str, Any]) -> QualityAnnotation:
    part1 = tuple(
        AspectScore(aspect=aspect, score=int(score))
        for aspect, score in data["part1"].items()
    )
    return QualityAnnotation(
        case_id=data["case_id"],
        part1=part1,
        part2_suitable=int(data["part2_suitable"]),
        part2_procedural=(
            int(data["part2_procedural"]) if "part2_procedural" in data else None
        ),
        annotator_id=data.get("annotator_id", ""),
        annotated_at=data.get("annotated_at", ""),
        notes=data.get("notes", ""),
    )


@dataclass(frozen=True)
class StoredAnnotation:
    annotation: QualityAnnotation
    version: int


class AnnotationStore:
    """One JSON document per case, versioned with an optimistic counter."""

    def __init__(self, annotations_dir: str | Path) -> None:
        self.root = Path(annotations_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, case_id: str) -> Path:
        return self.root / f"{safe_filename(case_id)}.json"

    def _lock_for(self, case_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(case_id, threading.Lock())

    def load(self, case_id: str) -> StoredAnnotation | None:
        path = self._path(case_id)
        if not path.exists():
            return None
        data = json.loads(path.read_text(encoding="utf-8"))
        return StoredAnnotation(
            annotation=annotation_from_dict(data["annotation"]),
            version=int(data["version"]),
        )

    def store(self, annotation: QualityAnnotation, expected_version: int) -> int:
        """Persist an annotation; the caller must present the current version.

        A fresh case has version 0. Returns the new version.
        """
        violations = validate_annotation(annotation)
        if violations:
            raise InvalidAnnotationError(violations)
        with self._lock_for(annotation.case_id):
            stored = self.load(annotation.case_id)
            current = stored.version if stored else 0
            if expected_version != current:
                raise AnnotationConflictError(
                    annotation.case_id, expected_version, current
                )
            new_version = current + 1
            payload = {
                "version": new_version,
                "annotation": annotation_to_dict(annotation),
            }
            path = self._path(annotation.case_id)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(
                json.dumps(payload, indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
            tmp.replace(path)
            return new_version

    def annotated_ids(self) -> set[str]:
        return {
            json.loads(path.read_text(encoding="utf-8"))["annotation"]["case_id"]
            for path in self.root.glob("*.json")
        }

    def list_pending(self, sample_ids: Iterable[str]) -> list[str]:
        done = self.annotated_ids()
        return [case_id for case_id in sample_ids if case_id not in done]

    def load_all(self) -> list[QualityAnnotation]:
        out = []
        for path in sorted(self.root.glob("*.json")):
            data = json.loads(path.read_text(encoding="utf-8"))
            out.append(annotation_from_dict(data["annotation"]))
        return out

    def export_jsonl(self, out_path: str | Path) -> int:
        annotations = sorted(self.load_all(), key=lambda a: a.case_id)
        with Path(out_path).open("w", encoding="utf-8") as handle:
            for annotation in annotations:
                handle.write(
                    json.dumps(annotation_to_dict(annotation), ensure_ascii=False)
                    + "\n"
                )
        return len(annotations)


# Annotator-facing conventions, rendered per aspect in the review UI.
RUBRIC: dict[str, Any] = {
    "part1": {
        "facts": (
            "Score 1 when the extracted facts correctly describe the events "
            "behind the dispute, whether workplace or procedural. Score 0 when "
            "they contain an error or omit the workplace events the judge relied "
            "on to decide the dispute. Accessory details (party names, hearing "
            "venue) are acceptable when correct. When the judgment itself states "
            "no facts, an output saying the file provides none scores 1; for a "
            "decision made on purely procedural grounds it is also acceptable "
            "for the facts section to omit the procedural events."
        ),
        "claims": (
            "Score 1 when the claims actually considered in this decision are "
            "identified correctly. When the file contains no claim details, the "
            "output must say so explicitly to score 1: a section that names a "
            "claim vaguely, or asserts the details are missing when the judge "
            "spelled them out, scores 0."
        ),
        "statute_refs": (
            "Score 1 only when every statute, regulation and procedural rule "
            "cited in the file appears, with its numbering. Any omission or "
            "imprecision scores 0."
        ),
        "precedent_refs": (
            "Score 1 only when all case law cited in the file is listed. A "
            "clear statement that the file cites none is correct when true."
        ),
        "general_outcome": (
            "Score 1 when the outcome is stated accurately and completely, "
            "covering every claim decided."
        ),
        "outcome_label": (
            "Score 1 when the four-way label fits the outcome under the house "
            "conventions: withdrawn claims count as 'claimant loses'; mixed "
            "results across several claims, and successful counterclaims "
            "alongside a successful claim, count as 'claimant partly wins'; "
            "a win reduced for contributory fault also counts as 'claimant "
            "partly wins'; 'other' is reserved for outcomes that cannot be "
            "described as winning or losing. Inconsistent labelling across "
            "similar cases is treated as a mistake."
        ),
        "order_remedies": (
            "Score 1 when the concrete orders and remedies (sums awarded, "
            "declarations, dismissals, cancelled hearings) are reported "
            "accurately and completely; a correct statement that no specific "
            "order was made also scores 1."
        ),
        "reasons": (
            "Score 1 when the section identifies what determined the outcome: "
            "the decisive facts, plus the legal arguments for a decision on the "
            "merits, or the procedural grounds for a procedural decision."
        ),
    },
    "part2": {
        "suitable": (
            "1 when the extracted facts, claims and outcome label together "
            "carry enough informative content to train an outcome predictor. "
            "0 when any of the three is missing or non-informative, e.g. the "
            "facts or claims section only records that the file provides no "
            "details, or contains accessory information only. Note: such an "
            "output can be perfectly accurate (part 1 score 1) and still be "
            "useless for prediction."
        ),
        "procedural": (
            "Only answered for suitable cases. 1 when the facts are dominated "
            "by procedural events in the litigation (withdrawal, missing "
            "response, non-compliance with orders) rather than events at the "
            "workplace; such cases support procedural prediction only. 0 when "
            "the facts mainly concern workplace events, allowing substantive "
            "prediction."
        ),
    },
    "eligibility": {
        "not-predictable": "suitable = 0: no prediction use at all",
        "procedural-only": "suitable = 1, procedural = 1: include only when "
        "procedural predictability is wanted",
        "substantive": "suitable = 1, procedural = 0: usable for substantive "
        "prediction",
    },
}
