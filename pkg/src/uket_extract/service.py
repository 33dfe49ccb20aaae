"""HTTP service backing the review UI.

Serves sampled cases with their extraction records and lint findings,
accepts quality-check annotations under optimistic versioning, and
exposes live accuracy statistics plus the annotator rubric. File-backed,
single instance; case text and records are read-only here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, HTTPException, Query
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus import CaseDocument
from .errors import AnnotationConflictError, InvalidAnnotationError
from .extraction import ExtractionRecord, lint_record, record_to_dict
from .quality import (
    RUBRIC,
    AnnotationStore,
    AspectScore,
    QualityAnnotation,
    annotation_to_dict,
)
from .stats import suitability_rate, summarize

DEFAULT_PORT = 8787


@dataclass
class ReviewWorkspace:
    """Everything the service reads and writes, keyed by case id."""

    cases: Mapping[str, CaseDocument]
    sample_ids: list[str]
    records: Mapping[str, ExtractionRecord]
    store: AnnotationStore
    static_dir: Path | None = field(default=None)


class AnnotationBody(BaseModel):
    case_id: str
    part1: dict[str, int]
    part2_suitable: int
    part2_procedural: int | None = None
    annotator_id: str = ""
    annotated_at: str = ""
    notes: str = ""

    def to_annotation(self) -> QualityAnnotation:
        return QualityAnnotation(
            case_id=self.case_id,
            part1=tuple(
                AspectScore(aspect=a, score=s) for a, s in self.part1.items()
            ),
            part2_suitable=self.part2_suitable,
            part2_procedural=self.part2_procedural,
            annotator_id=self.annotator_id,
            annotated_at=self.annotated_at,
            notes=self.notes,
        )


class AnnotationPut(BaseModel):
    annotation: AnnotationBody
    expected_version: int


def create_app(workspace: ReviewWorkspace) -> FastAPI:
    app = FastAPI(title="uket-extract review service")

    def case_status(case_id: str) -> str:
        return "done" if workspace.store.load(case_id) is not None else "pending"

    def listed_entry(case_id: str) -> dict[str, Any]:
        case = workspace.cases.get(case_id)
        record = workspace.records.get(case_id)
        return {
            "case_id": case_id,
            "page_count": case.page_count if case else None,
            "status": case_status(case_id),
            "label": record.outcome_label.value if record else None,
        }

    @app.get("/api/cases")
    def list_cases(
        status: str = Query("all", pattern="^(pending|done|all)$"),
        page: int = Query(1, ge=1),
        page_size: int = Query(50, ge=1, le=500),
    ) -> dict[str, Any]:
        entries = [listed_entry(case_id) for case_id in workspace.sample_ids]
        if status != "all":
            entries = [e for e in entries if e["status"] == status]
        start = (page - 1) * page_size
        return {
            "items": entries[start : start + page_size],
            "total": len(entries),
            "page": page,
            "page_size": page_size,
        }

    @app.put("/api/cases/{case_id:path}/annotation")
    def put_annotation(case_id: str, body: AnnotationPut) -> dict[str, Any]:
        if case_id not in set(workspace.sample_ids):
            raise HTTPException(status_code=404, detail=f"unknown case: {case_id}")
        annotation = body.annotation.to_annotation()
        if annotation.case_id != case_id:
            raise HTTPException(
                status_code=422, detail=["annotation case_id does not match the URL"]
            )
        try:
            version = workspace.store.store(annotation, body.expected_version)
        except InvalidAnnotationError as exc:
            raise HTTPException(status_code=422, detail=exc.violations) from exc
        except AnnotationConflictError as exc:
            raise HTTPException(
                status_code=409,
                detail={
                    "message": str(exc),
                    "current_version": exc.current,
                },
            ) from exc
        return {"version": version}

    @app.get("/api/cases/{case_id:path}")
    def get_case(case_id: str) -> dict[str, Any]:
        if case_id not in set(workspace.sample_ids):
            raise HTTPException(status_code=404, detail=f"unknown case: {case_id}")
        case = workspace.cases.get(case_id)
        record = workspace.records.get(case_id)
        stored = workspace.store.load(case_id)
        return {
            "case_id": case_id,
            "body_text": case.body_text if case else "",
            "page_count": case.page_count if case else None,
            "record": record_to_dict(record) if record else None,
            "lint": (
                [
                    {
                        "rule_id": f.rule_id,
                        "severity": f.severity,
                        "section": f.section,
                        "message": f.message,
                    }
                    for f in lint_record(record)
                ]
                if record
                else []
            ),
            "annotation": (
                annotation_to_dict(stored.annotation) if stored else None
            ),
            "version": stored.version if stored else 0,
            "status": "done" if stored else "pending",
        }

    @app.get("/api/stats")
    def get_stats() -> dict[str, Any]:
        annotations = workspace.store.load_all()
        if not annotations:
            return {"annotated": 0, "table": None, "suitability": None}
        table = summarize(annotations, workspace.records)
        pages = {cid: case.page_count for cid, case in workspace.cases.items()}
        suitability = suitability_rate(annotations, pages)
        return {
            "annotated": len(annotations),
            "table": table.to_dict(),
            "suitability": {
                "suitable_count": suitability.suitable_count,
                "suitable_pct": suitability.suitable_pct,
                "multipage_count": suitability.multipage_count,
            },
        }

    @app.get("/api/rubric")
    def get_rubric() -> dict[str, Any]:
        return RUBRIC

    if workspace.static_dir is not None and workspace.static_dir.is_dir():
        app.mount(
            "/", StaticFiles(directory=workspace.static_dir, html=True), name="ui"
        )

    return app
