"""Judgment corpus loading, page-count stratification and seeded sampling.

A corpus on disk is a directory of UTF-8 plain-text transcripts named
``<case_id with '/' replaced by '_'>.txt`` plus one ``manifest.json``
mapping each case id to its metadata. Page counts come from the manifest
when present; otherwise they are estimated from the transcript length.
"""

from __future__ import annotations

import json
import logging
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import CorpusIntegrityError, InvalidDocumentError

logger = logging.getLogger(__name__)

# Fallback page-size estimate when the manifest carries no page count.
CHARS_PER_PAGE = 3000

OPEN_BUCKET = ">20"

# Stratification buckets: one per page count 1..20 plus the open bucket.
BUCKETS: tuple[str, ...] = tuple(str(n) for n in range(1, 21)) + (OPEN_BUCKET,)

_TABLE1_TARGETS = (163, 43, 9, 6, 4, 3, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 11)


@dataclass(frozen=True)
class CaseDocument:
    """One judgment transcript with its identity and tribunal metadata."""

    case_id: str
    body_text: str
    page_count: int
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.case_id:
            raise InvalidDocumentError("case_id must be non-empty")
        if not self.body_text:
            raise InvalidDocumentError(f"{self.case_id}: body_text must be non-empty")
        if self.page_count < 1:
            raise InvalidDocumentError(f"{self.case_id}: page_count must be >= 1")


@dataclass(frozen=True)
class SamplePlan:
    """Ordered per-bucket sampling targets covering every page count."""

    strata: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        buckets = [bucket for bucket, _ in self.strata]
        if sorted(buckets) != sorted(BUCKETS):
            raise ValueError(
                "plan strata must cover each bucket 1..20 and '>20' exactly once"
            )
        for bucket, target in self.strata:
            if target < 0:
                raise ValueError(f"bucket {bucket}: target must be >= 0")

    @property
    def total(self) -> int:
        return sum(target for _, target in self.strata)


# The published sampling plan: 260 cases across the 21 page buckets.
TABLE1_PLAN = SamplePlan(tuple(zip(BUCKETS, _TABLE1_TARGETS)))


def estimate_page_count(body_text: str) -> int:
    """Estimate a transcript's page count from its character count.

    Used only when the source metadata lacks a page count; one page per
    3000 characters, rounded up, never below 1.
    """
    if not body_text:
        raise InvalidDocumentError("cannot estimate page count for empty text")
    return max(1, math.ceil(len(body_text) / CHARS_PER_PAGE))


def bucket_for(page_count: int) -> str:
    """Map a page count onto its stratification bucket."""
    if page_count < 1:
        raise ValueError("page_count must be >= 1")
    return str(page_count) if page_count <= 20 else OPEN_BUCKET


def stratify(corpus: Iterable[CaseDocument]) -> dict[str, list[str]]:
    """Partition a corpus into page-count buckets.

    Every case lands in exactly one bucket; all buckets are present in
    the result, empty ones included. Duplicate case ids are rejected.
    """
    buckets: dict[str, list[str]] = {bucket: [] for bucket in BUCKETS}
    seen: set[str] = set()
    for case in corpus:
        if case.case_id in seen:
            raise CorpusIntegrityError(f"duplicate case_id: {case.case_id}")
        seen.add(case.case_id)
        buckets[bucket_for(case.page_count)].append(case.case_id)
    return buckets


def sample(
    corpus: Iterable[CaseDocument], plan: SamplePlan, seed: int
) -> list[str]:
    """Draw a stratified sample: per bucket, ``min(target, available)`` ids.

    Draws are uniform without replacement and fully determined by
    (corpus, plan, seed). Output order is plan bucket order, then draw
    order within each bucket. A bucket with fewer cases than its target
    yields all of them and logs a shortfall warning.
    """
    buckets = stratify(corpus)
    rng = random.Random(seed)
    picked: list[str] = []
    for bucket, target in plan.strata:
        available = buckets[bucket]
        take = min(target, len(available))
        if take < target:
            logger.warning(
                "bucket %s: wanted %d cases but only %d available",
                bucket,
                target,
                len(available),
            )
        picked.extend(rng.sample(available, take))
    return picked


def sample_manifest(
    corpus: Iterable[CaseDocument], plan: SamplePlan, seed: int
) -> dict[str, Any]:
    """Run :func:`sample` and wrap the result with its provenance."""
    docs = list(corpus)
    by_id = {doc.case_id: doc for doc in docs}
    ids = sample(docs, plan, seed)
    counts: dict[str, int] = {bucket: 0 for bucket in BUCKETS}
    for case_id in ids:
        counts[bucket_for(by_id[case_id].page_count)] += 1
    shortfalls = {
        bucket: target - counts[bucket]
        for bucket, target in plan.strata
        if counts[bucket] < target
    }
    return {
        "seed": seed,
        "strata": [[bucket, target] for bucket, target in plan.strata],
        "counts": counts,
        "shortfalls": shortfalls,
        "total": len(ids),
        "case_ids": ids,
    }


def safe_filename(case_id: str) -> str:
    """Filesystem-safe form of a tribunal reference ('/' becomes '_')."""
    return case_id.replace("/", "_")


def case_id_from_filename(stem: str) -> str:
    """Invert :func:`safe_filename` (the last '_' was the reference '/')."""
    head, sep, tail = stem.rpartition("_")
    return f"{head}/{tail}" if sep else stem


def load_corpus(corpus_dir: str | Path) -> list[CaseDocument]:
    """Load a corpus directory: manifest.json plus one .txt per case."""
    root = Path(corpus_dir)
    manifest_path = root / "manifest.json"
    if not manifest_path.exists():
        raise CorpusIntegrityError(f"missing manifest: {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    docs: list[CaseDocument] = []
    for case_id, meta in manifest.items():
        path = root / f"{safe_filename(case_id)}.txt"
        if not path.exists():
            raise CorpusIntegrityError(f"{case_id}: transcript file missing: {path}")
        body = path.read_text(encoding="utf-8")
        meta = dict(meta or {})
        page_count = meta.pop("page_count", None)
        if page_count is None:
            page_count = estimate_page_count(body)
        docs.append(
            CaseDocument(
                case_id=case_id,
                body_text=body,
                page_count=int(page_count),
                meta=meta,
            )
        )
    return docs
