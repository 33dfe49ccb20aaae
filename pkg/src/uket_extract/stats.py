"""Accuracy statistics: proportion estimates, the two-column accuracy
table, suitability counts and the procedural-rule occurrence report.

Interval convention. :func:`accuracy_ci` is the plain 95% normal
approximation computed from the exact proportion at its own trial count.
The published accuracy table follows the reference-table convention
instead: each cell's half-width is computed from the display-rounded
proportion at the full-sample trial count, for the suitable-only column
as well. Both are exposed; the table formatter owns the latter.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping

from .corpus import CaseDocument
from .errors import DanglingReferenceError
from .extraction import ASPECTS, ExtractionRecord
from .quality import QualityAnnotation

Z95 = 1.96


def round_half_up(value: float, places: int = 3) -> Decimal:
    exponent = Decimal(1).scaleb(-places)
    return Decimal(repr(value)).quantize(exponent, rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class ProportionEstimate:
    """successes/trials with a 95% normal-approximation half-width."""

    successes: int
    trials: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.successes <= self.trials:
            raise ValueError("successes must lie in [0, trials]")

    @property
    def p(self) -> float:
        return self.successes / self.trials

    @property
    def half_width(self) -> float:
        # s*(n-s)/n^3 keeps the value exactly symmetric in s and n-s.
        s, n = self.successes, self.trials
        return Z95 * math.sqrt(s * (n - s) / (n * n * n))

    @property
    def formatted(self) -> str:
        if self.successes in (0, self.trials):
            return f"{round_half_up(self.p)}"
        return f"{round_half_up(self.p)} ± {round_half_up(self.half_width)}"


def accuracy_ci(successes: int, trials: int) -> ProportionEstimate:
    """95% Wald estimate for a success proportion."""
    return ProportionEstimate(successes=successes, trials=trials)


def table_cell(successes: int, trials: int, ci_trials: int) -> str:
    """Format one accuracy-table cell under the reference-table convention.

    The proportion is rounded half-up to 3 decimal places first and the
    half-width is computed from that rounded value at ``ci_trials`` (the
    full-sample count, whatever column the cell sits in). Degenerate
    proportions print bare, without an interval.
    """
    p_display = round_half_up(successes / trials)
    if successes in (0, trials):
        return f"{p_display}"
    p = float(p_display)
    half_width = Z95 * math.sqrt(p * (1.0 - p) / ci_trials)
    return f"{p_display} ± {round_half_up(half_width)}"


@dataclass(frozen=True)
class AccuracyRow:
    aspect: str
    all_cases: ProportionEstimate
    suitable_only: ProportionEstimate | None


@dataclass(frozen=True)
class AccuracyTable:
    """Eight aspect rows, each with an all-cases and a suitable-only column."""

    rows: tuple[AccuracyRow, ...]
    all_trials: int
    suitable_trials: int

    def cell(self, aspect: str, column: str) -> str:
        row = next(r for r in self.rows if r.aspect == aspect)
        if column == "all":
            estimate = row.all_cases
        elif column == "suitable":
            if row.suitable_only is None:
                return "-"
            estimate = row.suitable_only
        else:
            raise ValueError(f"unknown column: {column}")
        return table_cell(estimate.successes, estimate.trials, self.all_trials)

    def to_dict(self) -> dict:
        def estimate_dict(est: ProportionEstimate | None, cell: str) -> dict | None:
            if est is None:
                return None
            return {
                "successes": est.successes,
                "trials": est.trials,
                "p": est.p,
                "half_width": est.half_width,
                "cell": cell,
            }

        return {
            "all_trials": self.all_trials,
            "suitable_trials": self.suitable_trials,
            "rows": [
                {
                    "aspect": row.aspect,
                    "all": estimate_dict(row.all_cases, self.cell(row.aspect, "all")),
                    "suitable": estimate_dict(
                        row.suitable_only, self.cell(row.aspect, "suitable")
                    ),
                }
                for row in self.rows
            ],
        }

    def render(self, columns: tuple[str, ...] = ("all", "suitable")) -> str:
        names = {"all": "all cases", "suitable": "suitable-only"}
        width = max(len(a) for a in ASPECTS)
        header = "aspect".ljust(width) + "".join(
            f"  {names[c]:>15}" for c in columns
        )
        lines = [header, "-" * len(header)]
        for row in self.rows:
            cells = "".join(f"  {self.cell(row.aspect, c):>15}" for c in columns)
            lines.append(row.aspect.ljust(width) + cells)
        return "\n".join(lines)


def summarize(
    annotations: Iterable[QualityAnnotation],
    records: Mapping[str, ExtractionRecord],
    subset: str = "all",
) -> AccuracyTable:
    """Aggregate part-1 scores into the two-column accuracy table.

    ``subset="all"`` bases the first column on every annotated case;
    ``subset="suitable-only"`` restricts it to suitable cases (the second
    column then coincides with the first).
    """
    if subset not in ("all", "suitable-only"):
        raise ValueError(f"unknown subset: {subset}")
    pool = sorted(annotations, key=lambda a: a.case_id)
    for annotation in pool:
        if annotation.case_id not in records:
            raise DanglingReferenceError(
                f"annotation for {annotation.case_id} has no extraction record"
            )
    if subset == "suitable-only":
        pool = [a for a in pool if a.part2_suitable == 1]
    if not pool:
        raise ValueError("no annotations to summarize (trials = 0)")
    suitable = [a for a in pool if a.part2_suitable == 1]
    rows = []
    for aspect in ASPECTS:
        all_est = ProportionEstimate(
            successes=sum(a.score_for(aspect) for a in pool),
            trials=len(pool),
        )
        suitable_est = (
            ProportionEstimate(
                successes=sum(a.score_for(aspect) for a in suitable),
                trials=len(suitable),
            )
            if suitable
            else None
        )
        rows.append(
            AccuracyRow(aspect=aspect, all_cases=all_est, suitable_only=suitable_est)
        )
    return AccuracyTable(
        rows=tuple(rows), all_trials=len(pool), suitable_trials=len(suitable)
    )


@dataclass(frozen=True)
class SuitabilityStats:
    suitable_count: int
    suitable_pct: float  # percentage at one decimal place
    multipage_count: int

    @property
    def formatted(self) -> str:
        return (
            f"{self.suitable_count} suitable ({self.suitable_pct}%), "
            f"{self.multipage_count} of them over one page"
        )


def suitability_rate(
    annotations: Iterable[QualityAnnotation],
    corpus: Iterable[CaseDocument] | Mapping[str, int],
) -> SuitabilityStats:
    """Count suitable cases, their share, and how many exceed one page."""
    pool = list(annotations)
    if not pool:
        raise ValueError("no annotations")
    if isinstance(corpus, Mapping):
        pages = dict(corpus)
    else:
        pages = {doc.case_id: doc.page_count for doc in corpus}
    suitable = [a for a in pool if a.part2_suitable == 1]
    pct = float(round_half_up(100.0 * len(suitable) / len(pool), 1))
    multipage = sum(1 for a in suitable if pages.get(a.case_id, 1) > 1)
    return SuitabilityStats(
        suitable_count=len(suitable), suitable_pct=pct, multipage_count=multipage
    )


# Sections inspected by the procedural-rule occurrence report.
RULE21_SECTIONS = ("facts", "statute_refs", "reasons")

# Token-bounded spellings of the no-response rule citation.
DEFAULT_RULE21_PATTERN = re.compile(
    r"(?<![A-Za-z0-9])(?:rule\s+21|r\.\s*21|r\s+21)(?![A-Za-z0-9])",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class Rule21Report:
    total_cases: int
    facts_statutes_reasons: int
    statutes_only: int
    statutes_and_reasons_not_facts: int
    other_patterns: Mapping[str, int]

    def to_dict(self) -> dict:
        return {
            "total_cases": self.total_cases,
            "facts_statutes_reasons": self.facts_statutes_reasons,
            "statutes_only": self.statutes_only,
            "statutes_and_reasons_not_facts": self.statutes_and_reasons_not_facts,
            "other_patterns": dict(self.other_patterns),
        }


def rule21_report(
    records: Iterable[ExtractionRecord],
    pattern: re.Pattern[str] = DEFAULT_RULE21_PATTERN,
) -> Rule21Report:
    """Bucket records by where they cite the no-response rule.

    A record applies the rule iff any of the facts, statute-references or
    reasons sections matches the detector. The three named buckets follow
    the presence pattern over those sections; anything else lands in
    other_patterns, keyed by the '+'-joined section names.
    """
    named = {
        ("facts", "statute_refs", "reasons"): "facts_statutes_reasons",
        ("statute_refs",): "statutes_only",
        ("statute_refs", "reasons"): "statutes_and_reasons_not_facts",
    }
    counts = {bucket: 0 for bucket in named.values()}
    other: dict[str, int] = {}
    total = 0
    for record in records:
        hits = tuple(
            section
            for section in RULE21_SECTIONS
            if pattern.search(record.section_text(section))
        )
        if not hits:
            continue
        total += 1
        if hits in named:
            counts[named[hits]] += 1
        else:
            key = "+".join(hits)
            other[key] = other.get(key, 0) + 1
    return Rule21Report(
        total_cases=total,
        facts_statutes_reasons=counts["facts_statutes_reasons"],
        statutes_only=counts["statutes_only"],
        statutes_and_reasons_not_facts=counts["statutes_and_reasons_not_facts"],
        other_patterns=other,
    )
