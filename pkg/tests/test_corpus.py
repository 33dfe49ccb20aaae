from __future__ import annotations

import json
import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uket_extract.corpus import (
    BUCKETS,
    CaseDocument,
    SamplePlan,
    TABLE1_PLAN,
    bucket_for,
    case_id_from_filename,
    estimate_page_count,
    load_corpus,
    safe_filename,
    sample,
    stratify,
)
from uket_extract.errors import CorpusIntegrityError, InvalidDocumentError


def make_case(case_id: str, pages: int) -> CaseDocument:
    return CaseDocument(case_id=case_id, body_text="judgment text", page_count=pages)


class TestEstimatePageCount:
    def test_single_character_is_one_page(self):
        assert estimate_page_count("x") == 1

    def test_page_boundary(self):
        assert estimate_page_count("a" * 3000) == 1
        assert estimate_page_count("a" * 3001) == 2

    def test_empty_text_rejected(self):
        with pytest.raises(InvalidDocumentError):
            estimate_page_count("")

    def test_golden_transcript_measured_lengths(self, golden_dir):
        # Character-count oracle: measured 1309 and 6316 chars respectively.
        short = (golden_dir / "3328920_2017.txt").read_text(encoding="utf-8")
        long = (golden_dir / "2301070_2018.txt").read_text(encoding="utf-8")
        assert estimate_page_count(short) == math.ceil(len(short) / 3000) == 1
        assert estimate_page_count(long) == math.ceil(len(long) / 3000) == 3


class TestStratify:
    def test_empty_corpus_gives_empty_mapping_for_all_buckets(self):
        buckets = stratify([])
        assert set(buckets) == set(BUCKETS)
        assert all(ids == [] for ids in buckets.values())

    def test_twenty_one_pages_goes_to_open_bucket(self):
        buckets = stratify([make_case("1/2020", 21)])
        assert buckets[">20"] == ["1/2020"]
        assert all(not ids for bucket, ids in buckets.items() if bucket != ">20")

    def test_duplicate_case_id_rejected(self):
        cases = [make_case("1/2020", 1), make_case("1/2020", 2)]
        with pytest.raises(CorpusIntegrityError):
            stratify(cases)

    def test_fixture_tallies_match_independent_manifest_scan(self, fixture_root):
        manifest = json.loads(
            (fixture_root / "corpus" / "manifest.json").read_text(encoding="utf-8")
        )
        expected = Counter(
            str(m["page_count"]) if m["page_count"] <= 20 else ">20"
            for m in manifest.values()
        )
        buckets = stratify(load_corpus(fixture_root / "corpus"))
        assert {b: len(ids) for b, ids in buckets.items() if ids} == dict(expected)

    @given(
        pages=st.lists(st.integers(min_value=1, max_value=40), max_size=60)
    )
    @settings(max_examples=200)
    def test_partition_property(self, pages):
        corpus = [make_case(f"{i}/2020", p) for i, p in enumerate(pages)]
        buckets = stratify(corpus)
        combined = [cid for ids in buckets.values() for cid in ids]
        assert sorted(combined) == sorted(c.case_id for c in corpus)
        assert len(combined) == len(set(combined))


def zero_plan() -> SamplePlan:
    return SamplePlan(tuple((b, 0) for b in BUCKETS))


def plan_with(bucket: str, target: int) -> SamplePlan:
    return SamplePlan(tuple((b, target if b == bucket else 0) for b in BUCKETS))


class TestSamplePlan:
    def test_table1_plan_totals_260(self):
        assert TABLE1_PLAN.total == 260

    def test_missing_bucket_rejected(self):
        with pytest.raises(ValueError):
            SamplePlan(tuple((b, 0) for b in BUCKETS[:-1]))

    def test_negative_target_rejected(self):
        with pytest.raises(ValueError):
            SamplePlan(tuple((b, -1 if b == "1" else 0) for b in BUCKETS))


class TestSample:
    def test_table1_plan_on_fixture_corpus(self, fixture_corpus):
        ids = sample(fixture_corpus, TABLE1_PLAN, seed=2013)
        by_id = {c.case_id: c for c in fixture_corpus}
        tallies = Counter(bucket_for(by_id[cid].page_count) for cid in ids)
        expected = {b: t for b, t in TABLE1_PLAN.strata if t}
        assert dict(tallies) == expected
        assert len(ids) == 260

    def test_all_zero_targets_gives_empty_list(self, fixture_corpus):
        assert sample(fixture_corpus, zero_plan(), seed=1) == []

    def test_same_seed_same_output(self, fixture_corpus):
        a = sample(fixture_corpus, TABLE1_PLAN, seed=7)
        b = sample(fixture_corpus, TABLE1_PLAN, seed=7)
        assert a == b

    def test_shortfall_takes_all_available(self, caplog):
        corpus = [make_case(f"{i}/2020", 1) for i in range(3)]
        ids = sample(corpus, plan_with("1", 10), seed=0)
        assert sorted(ids) == sorted(c.case_id for c in corpus)

    def test_within_bucket_draws_are_uniform(self):
        # Frequency oracle: 10,000 reseeded draws of 3 from a 10-case bucket;
        # chi-square statistic against the flat expectation, alpha = 0.01,
        # critical value 21.666 at 9 degrees of freedom.
        corpus = [make_case(f"{i}/2020", 1) for i in range(10)]
        plan = plan_with("1", 3)
        counts: Counter[str] = Counter()
        for seed in range(10_000):
            counts.update(sample(corpus, plan, seed))
        expected = 10_000 * 3 / 10
        stat = sum(
            (counts[c.case_id] - expected) ** 2 / expected for c in corpus
        )
        assert stat < 21.666

    @given(
        data=st.data(),
        pages=st.lists(
            st.integers(min_value=1, max_value=25), min_size=1, max_size=40
        ),
    )
    @settings(max_examples=200)
    def test_cardinality_and_no_replacement(self, data, pages):
        corpus = [make_case(f"{i}/2020", p) for i, p in enumerate(pages)]
        targets = {
            b: data.draw(st.integers(min_value=0, max_value=5), label=f"t{b}")
            for b in BUCKETS
        }
        plan = SamplePlan(tuple((b, targets[b]) for b in BUCKETS))
        seed = data.draw(st.integers(min_value=0, max_value=2**32), label="seed")
        ids = sample(corpus, plan, seed)
        assert len(ids) == len(set(ids))
        buckets = stratify(corpus)
        expected_total = sum(
            min(targets[b], len(buckets[b])) for b in BUCKETS
        )
        assert len(ids) == expected_total


class TestLoadCorpus:
    def test_filename_round_trip(self):
        assert safe_filename("3328920/2017") == "3328920_2017"
        assert case_id_from_filename("3328920_2017") == "3328920/2017"

    def test_page_count_fallback_when_metadata_absent(self, tmp_path):
        (tmp_path / "manifest.json").write_text(
            json.dumps({"9/2020": {}}), encoding="utf-8"
        )
        (tmp_path / "9_2020.txt").write_text("b" * 6100, encoding="utf-8")
        docs = load_corpus(tmp_path)
        assert docs[0].page_count == 3

    def test_metadata_page_count_wins(self, tmp_path):
        (tmp_path / "manifest.json").write_text(
            json.dumps({"9/2020": {"page_count": 12}}), encoding="utf-8"
        )
        (tmp_path / "9_2020.txt").write_text("short", encoding="utf-8")
        docs = load_corpus(tmp_path)
        assert docs[0].page_count == 12

    def test_missing_transcript_rejected(self, tmp_path):
        (tmp_path / "manifest.json").write_text(
            json.dumps({"9/2020": {"page_count": 1}}), encoding="utf-8"
        )
        with pytest.raises(CorpusIntegrityError):
            load_corpus(tmp_path)
