from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uket_extract.errors import (
    AmbiguousSectionError,
    MissingSectionError,
    UnparseableLabelError,
)
from uket_extract.extraction import (
    ASPECTS,
    ExtractionRecord,
    OutcomeLabel,
    detect_absence,
    lint_record,
    load_records,
    normalize_label,
    parse_extraction,
    record_from_dict,
    record_to_dict,
    segment_response,
)

NUMBERED_TEMPLATE = """1. Facts of the case: {facts}

2. Claims made in the case: {claims}

3. References to legal statutes, acts, regulations, provisions and rules: {statutes}

4. References to precedents and other court decisions: {precedents}

5. General case outcome: {general}

6. General case outcome summarised using one of the following four labels: {label}

7. Detailed order and remedies: {remedies}

8. Essential reasons for the decision: {reasons}
"""


def numbered_response(**overrides) -> str:
    values = {
        "facts": "The claimant worked for the respondent as a chef.",
        "claims": "The claimant claimed unpaid wages.",
        "statutes": "The case refers to section 13 of the Employment Rights Act 1996.",
        "precedents": "There are no references to precedents or other court "
        "decisions in the provided text.",
        "general": "The tribunal upheld the complaint.",
        "label": "'Claimant wins'.",
        "remedies": "The respondent must pay the claimant £1,500.00.",
        "reasons": "The tribunal found that the sums remained properly payable.",
    }
    values.update(overrides)
    return NUMBERED_TEMPLATE.format(**values)


def build_record(**overrides) -> ExtractionRecord:
    base = dict(
        case_id="1/2020",
        facts="The claimant worked for the respondent.",
        claims="The claimant claimed unpaid wages.",
        statute_refs="The case refers to the Employment Rights Act 1996.",
        precedent_refs="There are no references to precedents or other court "
        "decisions in the provided text.",
        general_outcome="The tribunal upheld the complaint.",
        outcome_label=OutcomeLabel.CLAIMANT_WINS,
        outcome_label_raw="Claimant wins.",
        order_remedies="The respondent must pay £1,000.00.",
        reasons="The tribunal found the deductions unlawful.",
    )
    base.update(overrides)
    record = ExtractionRecord(**base, absence_flags={})
    flags = {a: detect_absence(record.section_text(a)) for a in ASPECTS}
    return ExtractionRecord(**base, absence_flags=flags)


class TestGoldenParses:
    def test_bulleted_bold_dialect(self, golden_response_1):
        record = parse_extraction("3328920/2017", golden_response_1)
        assert record.outcome_label is OutcomeLabel.CLAIMANT_PARTLY_WINS
        assert (
            "Rule 21 of Schedule 1 to the Employment Tribunals (Constitution "
            "and Rules of Procedure) Regulations 2013" in record.statute_refs
        )
        assert record.absence_flags["precedent_refs"] is True
        assert record.outcome_label_raw in golden_response_1

    def test_numbered_dialect(self, golden_response_2):
        record = parse_extraction("2301070/2018", golden_response_2)
        assert record.outcome_label is OutcomeLabel.CLAIMANT_PARTLY_WINS
        assert "Agarwal v Cardiff University" in record.precedent_refs
        assert "Chesterton Global v Nurmohamed" in record.precedent_refs
        assert record.outcome_label_raw == "'Claimant partly wins'."

    def test_golden_round_trips(self, golden_response_1, golden_response_2):
        for case_id, raw in (
            ("3328920/2017", golden_response_1),
            ("2301070/2018", golden_response_2),
        ):
            record = parse_extraction(case_id, raw)
            assert record_from_dict(record_to_dict(record)) == record

    def test_golden_lint_is_clean(self, golden_response_1):
        record = parse_extraction("3328920/2017", golden_response_1)
        assert lint_record(record) == []


class TestParseErrors:
    def test_missing_section_names_first_absent(self):
        response = "\n".join(
            line
            for line in numbered_response().split("\n")
            if not line.startswith("6.")
        )
        with pytest.raises(MissingSectionError) as exc_info:
            parse_extraction("1/2020", response)
        assert exc_info.value.section == "outcome_label"

    def test_two_missing_sections_name_the_earlier_aspect(self):
        response = "\n".join(
            line
            for line in numbered_response().split("\n")
            if not line.startswith(("2.", "7."))
        )
        with pytest.raises(MissingSectionError) as exc_info:
            parse_extraction("1/2020", response)
        assert exc_info.value.section == "claims"

    def test_duplicated_heading_is_ambiguous(self):
        response = numbered_response() + "\n5. General case outcome: again.\n"
        with pytest.raises(AmbiguousSectionError) as exc_info:
            parse_extraction("1/2020", response)
        assert exc_info.value.section == "general_outcome"

    def test_unnormalizable_label_rejected(self):
        with pytest.raises(UnparseableLabelError):
            parse_extraction("1/2020", numbered_response(label="defendant wins"))

    def test_empty_response_rejected(self):
        with pytest.raises(Exception):
            parse_extraction("1/2020", "   \n  ")


class TestSectionOrderAndPreservation:
    def test_sections_accepted_in_any_order(self):
        lines = [l for l in numbered_response().split("\n") if l.strip()]
        response = "\n\n".join(reversed(lines))
        record = parse_extraction("1/2020", response)
        assert record.outcome_label is OutcomeLabel.CLAIMANT_WINS

    def test_multiline_bodies_attach_to_their_section(self):
        response = numbered_response(
            claims="The claimant made four claims:\n- wages (£100)\n- holiday pay"
        )
        record = parse_extraction("1/2020", response)
        assert "- holiday pay" in record.claims

    def test_fixture_responses_preserve_all_non_heading_text(self, fixture_root):
        squash = lambda s: "".join(s.split())  # noqa: E731
        for path in sorted((fixture_root / "responses").glob("*.txt"))[:40]:
            raw = path.read_text(encoding="utf-8")
            rebuilt = "".join(
                seg.heading + seg.body for seg in segment_response(raw)
            )
            assert squash(rebuilt) == squash(raw), path.name

    def test_fixture_records_round_trip(self, fixture_root, fixture_records):
        for case_id, record in list(fixture_records.items())[:40]:
            assert record_from_dict(record_to_dict(record)) == record

    def test_records_match_reparse_of_responses(self, fixture_root, fixture_records):
        from uket_extract.corpus import safe_filename

        for case_id in list(fixture_records)[:40]:
            raw = (
                fixture_root / "responses" / f"{safe_filename(case_id)}.txt"
            ).read_text(encoding="utf-8")
            assert parse_extraction(case_id, raw) == fixture_records[case_id]


CANONICAL_LABELS = {
    "claimant wins": OutcomeLabel.CLAIMANT_WINS,
    "claimant partly wins": OutcomeLabel.CLAIMANT_PARTLY_WINS,
    "claimant loses": OutcomeLabel.CLAIMANT_LOSES,
    "other": OutcomeLabel.OTHER,
}

CASINGS = (str.lower, str.title, str.upper)
WRAPPERS = ("{}", "'{}'", '"{}"', "**{}**")
TRAILERS = ("", ".")

GRID = [
    (text, label, casing, wrapper, trailer)
    for text, label in CANONICAL_LABELS.items()
    for casing in CASINGS
    for wrapper in WRAPPERS
    for trailer in TRAILERS
]


class TestNormalizeLabel:
    def test_grid_has_96_variants(self):
        assert len(GRID) == 96

    @pytest.mark.parametrize("text,label,casing,wrapper,trailer", GRID)
    def test_decorated_variant_normalizes(self, text, label, casing, wrapper, trailer):
        decorated = wrapper.format(casing(text)) + trailer
        assert normalize_label(decorated) is label

    @given(
        choice=st.sampled_from(GRID),
        pad=st.sampled_from(["", " ", "  "]),
    )
    @settings(max_examples=250)
    def test_sampled_variants_normalize(self, choice, pad):
        text, label, casing, wrapper, trailer = choice
        decorated = pad + wrapper.format(casing(text)) + trailer + pad
        assert normalize_label(decorated) is label

    def test_partially_synonym_maps_to_partly(self):
        assert (
            normalize_label("Claimant partially wins")
            is OutcomeLabel.CLAIMANT_PARTLY_WINS
        )

    def test_quoted_with_trailing_period(self):
        assert (
            normalize_label("'Claimant partly wins'.")
            is OutcomeLabel.CLAIMANT_PARTLY_WINS
        )

    def test_outside_closed_set_rejected(self):
        with pytest.raises(UnparseableLabelError):
            normalize_label("defendant wins")

    def test_blank_rejected(self):
        with pytest.raises(UnparseableLabelError):
            normalize_label("   ")


class TestDetectAbsence:
    def test_no_precedent_references_phrase(self):
        text = (
            "There are no references to precedents or other court decisions "
            "in the provided text."
        )
        assert detect_absence(text) is True

    def test_substantive_statute_text_is_present(self):
        assert (
            detect_absence("The case refers to the Employment Rights Act 1996")
            is False
        )

    def test_empty_text_counts_as_absent(self):
        assert detect_absence("") is True

    def test_withdrawn_claim_wording_is_not_absence(self):
        # A vague claims section that names a claim trips no absence marker.
        text = (
            "The claimant, Mr W Mollan, had made a claim against the "
            "respondents, Arrow XI Limited, but later withdrew it."
        )
        assert detect_absence(text) is False

    def test_custom_phrase_list(self):
        assert detect_absence("nothing to report", phrases=("nothing to",)) is True
        assert detect_absence("nothing to report") is False


class TestLint:
    def test_withdrawal_with_other_label_trips_l1(self):
        record = build_record(
            general_outcome="The claim was dismissed upon withdrawal.",
            outcome_label=OutcomeLabel.OTHER,
            outcome_label_raw="Other.",
        )
        findings = lint_record(record)
        assert [f.rule_id for f in findings] == ["L1"]
        assert findings[0].section == "outcome_label"
        assert "claimant loses" in findings[0].message

    def test_withdrawal_with_loses_label_is_clean(self):
        record = build_record(
            general_outcome="The claim was dismissed upon withdrawal.",
            outcome_label=OutcomeLabel.CLAIMANT_LOSES,
        )
        assert lint_record(record) == []

    def test_similarly_organised_trips_l2(self):
        for spelling in ("organised", "organized"):
            record = build_record(
                facts="The information for the other claimants can be "
                f"similarly {spelling}."
            )
            findings = lint_record(record)
            assert ("L2", "error") in {(f.rule_id, f.severity) for f in findings}

    def test_empty_unflagged_reasons_trips_l3(self):
        record = ExtractionRecord(
            case_id="1/2020",
            facts="facts",
            claims="claims",
            statute_refs="statutes",
            precedent_refs="precedents",
            general_outcome="outcome",
            outcome_label=OutcomeLabel.CLAIMANT_WINS,
            outcome_label_raw="Claimant wins",
            order_remedies="order",
            reasons="",
            absence_flags={a: False for a in ASPECTS},
        )
        assert [f.rule_id for f in lint_record(record)] == ["L3"]

    def test_absent_flagged_reasons_is_clean(self):
        record = build_record(reasons="")
        assert lint_record(record) == []

    def test_lint_is_deterministic(self):
        record = build_record(
            facts="Claims were withdrawn and outcomes similarly organised.",
            outcome_label=OutcomeLabel.OTHER,
            outcome_label_raw="Other",
        )
        first = lint_record(record)
        assert first == lint_record(record)
        assert [f.rule_id for f in first] == ["L1", "L2"]

    def test_fixture_lint_totals(self, fixture_records):
        by_rule = {"L1": 0, "L2": 0, "L3": 0}
        for record in fixture_records.values():
            for finding in lint_record(record):
                by_rule[finding.rule_id] += 1
        assert by_rule == {"L1": 16, "L2": 0, "L3": 0}


class TestSerialization:
    def test_serialized_fields_are_flat_and_named(self):
        data = record_to_dict(build_record())
        assert list(data) == [
            "case_id",
            "facts",
            "claims",
            "statute_refs",
            "precedent_refs",
            "general_outcome",
            "outcome_label",
            "outcome_label_raw",
            "order_remedies",
            "reasons",
            "absence_flags",
        ]
        assert data["outcome_label"] == "claimant wins"

    def test_jsonl_bundle_round_trips(self, tmp_path, fixture_records):
        from uket_extract.extraction import records_to_jsonl

        path = tmp_path / "records.jsonl"
        subset = list(fixture_records.values())[:10]
        assert records_to_jsonl(subset, path) == 10
        lines = path.read_text(encoding="utf-8").splitlines()
        rebuilt = [record_from_dict(json.loads(line)) for line in lines]
        assert sorted(rebuilt, key=lambda r: r.case_id) == sorted(
            subset, key=lambda r: r.case_id
        )
