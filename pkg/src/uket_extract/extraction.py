"""Parsing of model responses into eight-section extraction records.

Responses arrive in two surface dialects: a numbered style
(``1. Facts of the case: ...``) and a bulleted bold style
(``- Facts of the case:** ...``). The parser keys each section on its
distinguishing noun phrase, longest phrase first so the summarised-outcome
heading is never swallowed by the general-outcome heading.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

from .corpus import safe_filename
from .errors import (
    AmbiguousSectionError,
    MissingSectionError,
    ResponseParseError,
    UnparseableLabelError,
)

# Canonical section order; also the record field names.
ASPECTS: tuple[str, ...] = (
    "facts",
    "claims",
    "statute_refs",
    "precedent_refs",
    "general_outcome",
    "outcome_label",
    "order_remedies",
    "reasons",
)


class OutcomeLabel(enum.Enum):
    CLAIMANT_WINS = "claimant wins"
    CLAIMANT_PARTLY_WINS = "claimant partly wins"
    CLAIMANT_LOSES = "claimant loses"
    OTHER = "other"


# Synonym used interchangeably for the partly-wins label.
_LABEL_SYNONYMS = {
    "claimant partially wins": OutcomeLabel.CLAIMANT_PARTLY_WINS,
}

_QUOTE_CHARS = "'\"‘’“”`"


def normalize_label(raw_label: str) -> OutcomeLabel:
    """Map decorated label text onto the closed four-label set.

    Case-insensitive; tolerates surrounding quotes, bold/italic markers
    and trailing punctuation, and accepts "claimant partially wins" as a
    synonym for the partly-wins label.
    """
    if not raw_label or not raw_label.strip():
        raise UnparseableLabelError(raw_label)
    text = raw_label.strip()
    while True:
        trimmed = text.strip().strip("*_").strip(_QUOTE_CHARS).rstrip(".,;:!")
        trimmed = trimmed.strip()
        if trimmed == text:
            break
        text = trimmed
    normalized = " ".join(text.lower().split())
    if normalized in _LABEL_SYNONYMS:
        return _LABEL_SYNONYMS[normalized]
    try:
        return OutcomeLabel(normalized)
    except ValueError:
        raise UnparseableLabelError(raw_label) from None


DEFAULT_ABSENCE_PHRASES: tuple[str, ...] = (
    "does not provide",
    "no specific references",
    "no references to precedents",
    "not specified in the file",
)


def detect_absence(
    section_text: str, phrases: Iterable[str] = DEFAULT_ABSENCE_PHRASES
) -> bool:
    """True when a section says the case file lacks that information.

    Empty text counts as absent; otherwise any configured marker phrase
    (matched case-insensitively) does.
    """
    if not section_text.strip():
        return True
    lowered = section_text.lower()
    return any(phrase.lower() in lowered for phrase in phrases)


# Heading noun phrases mapped to aspects, tried longest-first.
_HEADING_PHRASES: tuple[tuple[str, str], ...] = (
    ("general case outcome summarised", "outcome_label"),
    ("general case outcome summarized", "outcome_label"),
    ("facts of the case", "facts"),
    ("claims made", "claims"),
    ("references to legal statutes", "statute_refs"),
    ("references to precedents", "precedent_refs"),
    ("general case outcome", "general_outcome"),
    ("detailed order and remedies", "order_remedies"),
    ("reasons for the decision", "reasons"),
    ("essential reasons", "reasons"),
)

# Bullet or enumerator a heading line may start with.
_PRELUDE = re.compile(r"^\s*(?:[-*•]\s*|\(?\d{1,2}[.)]\s*)?(?:\*\*)?\s*")

# A heading may carry extra words between the key phrase and its colon,
# but never a full sentence.
_MAX_HEADING_GAP = 80


@dataclass(frozen=True)
class Segment:
    """One parsed section: the heading as matched and the verbatim body."""

    aspect: str
    heading: str
    body: str


def _match_heading(line: str) -> tuple[str, str, str] | None:
    """Recognize a section heading line.

    Returns (aspect, heading_text, same-line body remainder), or None if
    the line does not open a section.
    """
    prelude = _PRELUDE.match(line)
    start = prelude.end() if prelude else 0
    rest = line[start:]
    lowered = rest.lower()
    for phrase, aspect in _HEADING_PHRASES:
        if not lowered.startswith(phrase):
            continue
        colon = rest.find(":", len(phrase))
        if colon < 0:
            continue
        gap = rest[len(phrase) : colon]
        if len(gap) > _MAX_HEADING_GAP or any(c in gap for c in ".!?"):
            continue
        body_start = start + colon + 1
        # The bold dialect leaves its closing marker right after the colon.
        after = line[body_start:]
        shift = len(after) - len(after.lstrip())
        if after.lstrip().startswith("**"):
            body_start += shift + 2
        return aspect, line[:body_start], line[body_start:]
    return None


def segment_response(raw_text: str) -> list[Segment]:
    """Split a raw response into its eight sections, any order accepted."""
    if not raw_text or not raw_text.strip():
        raise ResponseParseError("empty response text")
    found: list[tuple[str, str, list[str]]] = []
    seen: set[str] = set()
    for line in raw_text.split("\n"):
        matched = _match_heading(line)
        if matched is not None:
            aspect, heading, remainder = matched
            if aspect in seen:
                raise AmbiguousSectionError(aspect)
            seen.add(aspect)
            found.append((aspect, heading, [remainder]))
        elif found:
            found[-1][2].append(line)
    for aspect in ASPECTS:
        if aspect not in seen:
            raise MissingSectionError(aspect)
    return [
        Segment(aspect=aspect, heading=heading, body="\n".join(body).strip())
        for aspect, heading, body in found
    ]


@dataclass(frozen=True)
class ExtractionRecord:
    """The parsed eight-section output of one extraction."""

    case_id: str
    facts: str
    claims: str
    statute_refs: str
    precedent_refs: str
    general_outcome: str
    outcome_label: OutcomeLabel
    outcome_label_raw: str
    order_remedies: str
    reasons: str
    absence_flags: Mapping[str, bool] = field(default_factory=dict)

    def section_text(self, aspect: str) -> str:
        if aspect == "outcome_label":
            return self.outcome_label_raw
        return getattr(self, aspect)


def parse_extraction(case_id: str, raw_text: str) -> ExtractionRecord:
    """Parse a raw model response into an :class:`ExtractionRecord`."""
    segments = {seg.aspect: seg for seg in segment_response(raw_text)}
    label_raw = segments["outcome_label"].body
    label = normalize_label(label_raw)
    texts = {aspect: segments[aspect].body for aspect in ASPECTS}
    texts["outcome_label"] = label_raw
    flags = {aspect: detect_absence(texts[aspect]) for aspect in ASPECTS}
    return ExtractionRecord(
        case_id=case_id,
        facts=texts["facts"],
        claims=texts["claims"],
        statute_refs=texts["statute_refs"],
        precedent_refs=texts["precedent_refs"],
        general_outcome=texts["general_outcome"],
        outcome_label=label,
        outcome_label_raw=label_raw,
        order_remedies=texts["order_remedies"],
        reasons=texts["reasons"],
        absence_flags=flags,
    )


@dataclass(frozen=True)
class LintFinding:
    rule_id: str
    severity: str  # "warning" | "error"
    section: str
    message: str


_WITHDRAW_STEM = re.compile(r"\bwithdr(?:aw|ew)\w*", re.IGNORECASE)
_TRUNCATION_MARKER = re.compile(r"similarly organi[sz]ed", re.IGNORECASE)

L1_MESSAGE = "withdrawn claims are labelled 'claimant loses' in the reference convention"
L2_MESSAGE = "per-party outcomes truncated"
L3_MESSAGE = "reasons section is empty but not marked absent"


def _lint_withdrawal_label(record: ExtractionRecord) -> list[LintFinding]:
    if record.outcome_label is not OutcomeLabel.OTHER:
        return []
    for aspect in ("facts", "general_outcome", "reasons"):
        if _WITHDRAW_STEM.search(record.section_text(aspect)):
            return [LintFinding("L1", "warning", "outcome_label", L1_MESSAGE)]
    return []


def _lint_truncation(record: ExtractionRecord) -> list[LintFinding]:
    return [
        LintFinding("L2", "error", aspect, L2_MESSAGE)
        for aspect in ASPECTS
        if _TRUNCATION_MARKER.search(record.section_text(aspect))
    ]


def _lint_empty_reasons(record: ExtractionRecord) -> list[LintFinding]:
    flagged = bool(record.absence_flags.get("reasons", False))
    if not flagged and not record.reasons.strip():
        return [LintFinding("L3", "warning", "reasons", L3_MESSAGE)]
    return []


LINT_RULES: dict[str, Callable[[ExtractionRecord], list[LintFinding]]] = {
    "L1": _lint_withdrawal_label,
    "L2": _lint_truncation,
    "L3": _lint_empty_reasons,
}


def lint_record(record: ExtractionRecord) -> list[LintFinding]:
    """Apply every registered lint rule; findings, never failures."""
    findings: list[LintFinding] = []
    for rule_id in sorted(LINT_RULES):
        findings.extend(LINT_RULES[rule_id](record))
    return findings


def record_to_dict(record: ExtractionRecord) -> dict[str, Any]:
    return {
        "case_id": record.case_id,
        "facts": record.facts,
        "claims": record.claims,
        "statute_refs": record.statute_refs,
        "precedent_refs": record.precedent_refs,
        "general_outcome": record.general_outcome,
        "outcome_label": record.outcome_label.value,
        "outcome_label_raw": record.outcome_label_raw,
        "order_remedies": record.order_remedies,
        "reasons": record.reasons,
        "absence_flags": dict(record.absence_flags),
    }


def record_from_dict(data: Mapping[str, Any]) -> ExtractionRecord:
    return ExtractionRecord(
        case_id=data["case_id"],
        facts=data["facts"],
        claims=data["claims"],
        statute_refs=data["statute_refs"],
        precedent_refs=data["precedent_refs"],
        general_outcome=data["general_outcome"],
        outcome_label=OutcomeLabel(data["outcome_label"]),
        outcome_label_raw=data["outcome_label_raw"],
        order_remedies=data["order_remedies"],
        reasons=data["reasons"],
        absence_flags=dict(data["absence_flags"]),
    )


def record_json(record: ExtractionRecord) -> str:
    return json.dumps(record_to_dict(record), indent=2, ensure_ascii=False) + "\n"


def save_record(record: ExtractionRecord, records_dir: str | Path) -> Path:
    path = Path(records_dir) / f"{safe_filename(record.case_id)}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(record_json(record), encoding="utf-8")
    return path


def load_record(path: str | Path) -> ExtractionRecord:
    return record_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def load_records(records_dir: str | Path) -> dict[str, ExtractionRecord]:
    records: dict[str, ExtractionRecord] = {}
    for path in sorted(Path(records_dir).glob("*.json")):
        record = load_record(path)
        records[record.case_id] = record
    return records


def records_to_jsonl(records: Iterable[ExtractionRecord], path: str | Path) -> int:
    """Bulk-transfer bundle: one record per line, sorted by case id."""
    ordered = sorted(records, key=lambda r: r.case_id)
    with Path(path).open("w", encoding="utf-8") as handle:
        for record in ordered:
            handle.write(json.dumps(record_to_dict(record), ensure_ascii=False) + "\n")
    return len(ordered)
