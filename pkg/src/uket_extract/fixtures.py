"""Deterministic reference fixture: a synthetic 300-case corpus whose
sampled, extracted and annotated slice reproduces the published evaluation
numbers exactly.

The generated tree contains the corpus, the seeded sample, one raw model
response per sampled case (in both response dialects), the primed replay
cache, the parsed records and the quality-check annotations. Regeneration
is byte-identical; tests compare the committed tree against a fresh build.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .corpus import CaseDocument, TABLE1_PLAN, safe_filename, sample_manifest
from .dataset import leakage_check
from .extraction import parse_extraction, save_record
from .gateway import CompletionResult, ReplayCache
from .prompting import ModelConfig, PromptRegistry, build_request
from .quality import AnnotationStore, AspectScore, QualityAnnotation

SAMPLE_SEED = 2013
_SHUFFLE_SEED = 62003

# Cases per page count in the synthetic corpus; every bucket clears its
# sampling target with room to spare.
_PAGE_DISTRIBUTION: tuple[tuple[int, int], ...] = (
    (1, 184), (2, 50), (3, 12), (4, 8), (5, 6), (6, 4), (7, 3), (8, 3),
    (9, 2), (10, 2), (11, 2), (12, 2), (13, 2), (14, 1), (15, 1), (16, 1),
    (17, 1), (18, 1), (19, 1), (20, 1),
    (22, 2), (24, 2), (26, 2), (28, 2), (31, 2), (35, 1), (42, 1), (57, 1),
)

_SURNAMES = (
    "Akintola", "Barrow", "Calder", "Davenport", "Ellery", "Fenwick",
    "Grantham", "Howells", "Iqbal", "Jarvis", "Kerrigan", "Lindqvist",
    "Marchetti", "Nowak", "Okafor", "Pemberton", "Quayle", "Rashford",
    "Soriano", "Thackeray", "Ubah", "Vickers", "Wainwright", "Xhaka",
    "Yeboah", "Zielinski", "Ashcombe", "Bretton", "Cosgrove", "Drummond",
    "Eastwood", "Fairhurst", "Goswami", "Hartley", "Ivanova", "Jephson",
)

_INITIALS = "ABCDEFGHJKLMNPRSTW"

_COMPANIES = (
    "Meadowbrook Logistics Ltd", "Harborne Care Group Ltd",
    "Calverton Foods Ltd", "Brightwell Facilities Management Ltd",
    "Stonegate Retail Ltd", "Northfleet Security Services Ltd",
    "Elmhurst Nursing Home Ltd", "Riverside Catering Ltd",
    "Kestrel Couriers Ltd", "Avondale Motor Factors Ltd",
    "Pennine Cleaning Services Ltd", "Lakeside Leisure Ltd",
    "Thornbury Construction Ltd", "Westgate Dental Practice Ltd",
    "Orchard House Schools Ltd", "Quayside Shipping Agency Ltd",
    "Silverdale Recruitment Ltd", "Foxglove Events Ltd",
    "Hollybank Veterinary Group Ltd", "Marlowe Print Works Ltd",
)

_JOBS = (
    "support worker", "warehouse operative", "retail assistant", "chef",
    "night care assistant", "delivery driver", "administrator",
    "security officer", "kitchen porter", "teaching assistant",
    "maintenance engineer", "cleaner", "receptionist", "sous chef",
)

_VENUES = (
    "London Central", "Manchester", "Leeds", "Watford", "Bristol",
    "Reading", "Birmingham", "Newcastle", "Cardiff", "Glasgow",
)

_JURISDICTIONS = (
    "unfair dismissal", "unauthorised deductions", "breach of contract",
    "working time", "redundancy pay", "holiday pay",
)

_STATUTES = (
    "sections 13 and 23 of the Employment Rights Act 1996",
    "section 94 and section 98 of the Employment Rights Act 1996",
    "regulations 13, 14 and 30 of the Working Time Regulations 1998",
    "section 135 and section 162 of the Employment Rights Act 1996",
    "sections 26 and 27 of the Equality Act 2010",
    "section 86 of the Employment Rights Act 1996",
)

_PRECEDENTS = (
    "Delaney v Staples", "Stack v Ajar-Tec Ltd", "Bear Scotland Ltd v Fulton",
    "Polkey v A E Dayton Services Ltd", "Autoclenz Ltd v Belcher",
    "Williams v British Airways plc",
)

_GRIEVANCES = (
    "the respondent failed to pay wages properly payable for the final "
    "weeks of the employment",
    "the employment was terminated without notice after the claimant "
    "raised concerns about rota changes",
    "accrued annual leave was not paid on termination of the employment",
    "the claimant was selected for redundancy without consultation and "
    "did not receive a redundancy payment",
    "the respondent reduced the claimant's contractual hours without "
    "agreement",
    "the claimant was not paid for overtime worked during stock-taking "
    "periods",
)

_FINDINGS = (
    "the deductions had no contractual basis and the sums claimed "
    "remained properly payable",
    "the dismissal fell outside the band of reasonable responses and the "
    "procedure followed was inadequate",
    "the respondent's records did not support the deductions made from "
    "the final payslip",
    "the claimant's evidence on the hours worked was consistent and "
    "unchallenged",
    "no fair consultation process preceded the termination of the "
    "employment",
    "the contractual documents entitled the claimant to the allowances "
    "claimed",
)

_CLAIM_SETS = (
    ("unauthorised deduction from wages", "accrued holiday pay"),
    ("unfair dismissal", "notice pay"),
    ("redundancy pay", "unpaid wages"),
    ("holiday pay", "arrears of wages"),
    ("breach of contract", "unpaid expenses"),
    ("unfair dismissal", "holiday pay"),
)

_RULE21_SPELLINGS = ("Rule 21", "r. 21", "r.21", "r 21")

_ABSENT_FACTS = "The document does not provide specific facts of the case."
_ABSENT_CLAIMS = "The document does not provide details of the specific claims made."
_ABSENT_STATUTES = (
    "There are no specific references to legal statutes or regulations in the "
    "provided text."
)
_ABSENT_PRECEDENTS = (
    "There are no references to precedents or other court decisions in the "
    "provided text."
)

ANNOTATOR_ID = "legal-expert-1"


def _case_ids_and_pages() -> list[tuple[str, int]]:
    pages: list[int] = []
    for page, count in _PAGE_DISTRIBUTION:
        pages.extend([page] * count)
    random.Random(_SHUFFLE_SEED).shuffle(pages)
    out = []
    for i, page in enumerate(pages):
        case_id = f"{3300100 + 17 * i}/{2017 + i % 6}"
        out.append((case_id, page))
    return out


def _party_names(i: int) -> tuple[str, str]:
    claimant = (
        f"M{'r' if i % 3 else 's'} {_INITIALS[i % len(_INITIALS)]} "
        f"{_SURNAMES[i % len(_SURNAMES)]}"
    )
    respondent = _COMPANIES[(i * 7) % len(_COMPANIES)]
    return claimant, respondent


def _body_text(i: int, case_id: str, pages: int) -> str:
    claimant, respondent = _party_names(i)
    venue = _VENUES[i % len(_VENUES)]
    paragraphs = [
        "EMPLOYMENT TRIBUNALS",
        f"Claimant: {claimant}",
        f"Respondent: {respondent}",
        f"Case Number: {case_id}",
        f"Heard at: {venue}",
        "JUDGMENT",
    ]
    body_paras = max(2, min(pages * 2, 18))
    for k in range(body_paras):
        grievance = _GRIEVANCES[(i + k) % len(_GRIEVANCES)]
        finding = _FINDINGS[(i + 2 * k) % len(_FINDINGS)]
        paragraphs.append(
            f"{k + 1}. Having considered the documents and the submissions of "
            f"the parties, the tribunal records that {grievance}, and that "
            f"{finding}."
        )
    paragraphs.append("FOR THE TRIBUNAL OFFICE")
    return "\n\n".join(paragraphs) + "\n"


class _Roles:
    """Deterministic assignment of every published count to sampled cases."""

    def __init__(self, sampled: list[str], pages: dict[str, int]) -> None:
        one_page = [cid for cid in sampled if pages[cid] == 1]
        multi = [cid for cid in sampled if pages[cid] > 1]
        if len(one_page) < 63 or len(multi) < 85:
            raise AssertionError("sample shape cannot host the role assignment")
        self.suitable_list = multi[:85] + one_page[:39]
        self.suitable = set(self.suitable_list)
        unsuit_one = one_page[39:]
        unsuit_multi = multi[85:]

        s = self.suitable_list
        self.label_zero = set(s[0:6]) | set(unsuit_one[0:16]) | set(unsuit_one[16:17])
        self.facts_zero = set(s[6:16]) | set(unsuit_one[17:22])
        self.claims_zero = set(s[16:19]) | set(unsuit_one[22:24])
        self.outcome_zero = set(s[19:20])
        self.remedies_zero = set(s[20:21])
        self.reasons_zero = set(s[21:22])

        self.withdrawal_other = set(unsuit_one[0:16])
        self.stay_mislabel = set(unsuit_one[16:17])
        self.contributory = set(s[0:6])
        self.withdrawal_loses = set(unsuit_one[24:36])
        self.vague_withdrawal_claims = set(unsuit_one[22:24])

        self.rule21_full = set(s[30:39])        # facts + statutes + reasons
        self.rule21_statutes = set(s[40:50])    # statutes only
        self.rule21_no_facts = set(unsuit_multi[0:7])  # statutes + reasons
        self.legit_other = set(s[75:78])

        self.procedural = self.rule21_full | set(s[50:71])

    def zero_aspects(self, case_id: str) -> set[str]:
        zeros = set()
        if case_id in self.label_zero:
            zeros.add("outcome_label")
        if case_id in self.facts_zero:
            zeros.add("facts")
        if case_id in self.claims_zero:
            zeros.add("claims")
        if case_id in self.outcome_zero:
            zeros.add("general_outcome")
        if case_id in self.remedies_zero:
            zeros.add("order_remedies")
        if case_id in self.reasons_zero:
            zeros.add("reasons")
        return zeros

    def label_for(self, case_id: str, i: int) -> str:
        if case_id in self.withdrawal_other:
            return "other"
        if case_id in self.legit_other:
            return "other"
        if case_id in self.stay_mislabel or case_id in self.contributory:
            return "claimant wins"
        if case_id in self.withdrawal_loses or case_id in self.vague_withdrawal_claims:
            return "claimant loses"
        return ("claimant wins", "claimant loses", "claimant partly wins")[i % 3]


def _sections(case_id: str, i: int, roles: _Roles) -> dict[str, str]:
    claimant, respondent = _party_names(i)
    amount = f"{950 + (i * 37) % 6000}.{(i * 13) % 90 + 10:02d}"
    label = roles.label_for(case_id, i)
    claims = _CLAIM_SETS[i % len(_CLAIM_SETS)]
    statute = _STATUTES[i % len(_STATUTES)]
    rule21 = _RULE21_SPELLINGS[i % len(_RULE21_SPELLINGS)]
    suitable = case_id in roles.suitable

    if case_id in roles.withdrawal_other or case_id in roles.withdrawal_loses:
        facts = (
            f"The case involves {claimant} (claimant) and {respondent} "
            f"(respondent). Before the hearing the claimant notified the "
            f"tribunal that the claim was withdrawn."
        )
        claims_text = (
            f"The claimant had brought a complaint of {claims[0]} against "
            f"the respondent."
        )
        statutes_text = _ABSENT_STATUTES
        precedents_text = _ABSENT_PRECEDENTS
        general = "The claim was dismissed upon withdrawal."
        remedies = "No order as to remedies was made."
        reasons = (
            "Following the withdrawal of the claim, the tribunal dismissed "
            "the proceedings without further consideration of the merits."
        )
    elif case_id in roles.stay_mislabel:
        facts = (
            f"The case involves {claimant} (claimant) and {respondent} "
            f"(respondent). The parties reached a settlement shortly before "
            f"the listed hearing."
        )
        claims_text = _ABSENT_CLAIMS
        statutes_text = _ABSENT_STATUTES
        precedents_text = _ABSENT_PRECEDENTS
        general = (
            "The proceedings were stayed to allow the parties to implement "
            "the terms of the settlement."
        )
        remedies = "No remedies were ordered at this stage."
        reasons = (
            "A stay was the appropriate course given the agreed settlement "
            "of the dispute."
        )
    elif case_id in roles.vague_withdrawal_claims:
        facts = (
            f"The case involves {claimant} (claimant) and {respondent} "
            f"(respondent). The hearing was vacated at the parties' request."
        )
        claims_text = (
            f"The claimant, {claimant}, had made a claim against the "
            f"respondent, {respondent}, but later withdrew it."
        )
        statutes_text = _ABSENT_STATUTES
        precedents_text = _ABSENT_PRECEDENTS
        general = "The claim was dismissed."
        remedies = "No order as to remedies was made."
        reasons = (
            "The tribunal dismissed the proceedings after the claimant "
            "abandoned the complaint before the hearing."
        )
    elif not suitable and case_id in roles.rule21_no_facts:
        facts = (
            f"The case was heard at {_VENUES[i % len(_VENUES)]} without "
            f"attendance by the respondent. The file records the identity "
            f"of the parties and little else."
        )
        claims_text = _ABSENT_CLAIMS
        statutes_text = (
            f"The case refers to {rule21} of Schedule 1 to the Employment "
            f"Tribunals (Constitution and Rules of Procedure) Regulations 2013."
        )
        precedents_text = _ABSENT_PRECEDENTS
        general = "Judgment was entered for the claimant on the available material."
        remedies = (
            f"The respondent must pay the claimant £{amount} within "
            f"14 days of this judgment."
        )
        reasons = (
            f"No response was presented and judgment was issued under "
            f"{rule21} on the material before the tribunal."
        )
    elif not suitable:
        if i % 2 == 0:
            facts = _ABSENT_FACTS
        else:
            facts = (
                f"The case concerns {claimant} and {respondent}. The hearing "
                f"took place at {_VENUES[i % len(_VENUES)]} by telephone."
            )
        claims_text = _ABSENT_CLAIMS if i % 3 else (
            f"The claimant brought a complaint of {claims[0]}; no further "
            f"detail of the complaint appears in the decision."
        )
        statutes_text = _ABSENT_STATUTES if i % 2 else (
            f"The case refers to {statute}."
        )
        precedents_text = _ABSENT_PRECEDENTS
        general = (
            "The claim was dismissed." if label == "claimant loses" else
            f"The tribunal found for the claimant and awarded £{amount}."
        )
        remedies = (
            "No order as to remedies was made."
            if label == "claimant loses"
            else f"The respondent is to pay the claimant £{amount}."
        )
        reasons = (
            "The brief written reasons record only that the tribunal "
            "accepted the unchallenged evidence before it."
        )
    else:
        job = _JOBS[i % len(_JOBS)]
        grievance = _GRIEVANCES[i % len(_GRIEVANCES)]
        finding = _FINDINGS[i % len(_FINDINGS)]
        facts = (
            f"The claimant, {claimant}, worked for the respondent, "
            f"{respondent}, as a {job}. The claimant alleged that {grievance}."
        )
        if case_id in roles.rule21_full:
            facts = (
                f"The claimant, {claimant}, was employed by the respondent, "
                f"{respondent}, as a {job}. The respondent did not present a "
                f"response to the claim and the tribunal proceeded under "
                f"{rule21} to decide the complaint on the available material."
            )
        claims_text = (
            f"The claimant claimed {claims[0]} and {claims[1]} against the "
            f"respondent."
        )
        statutes_text = f"The case refers to {statute}."
        if case_id in roles.rule21_full or case_id in roles.rule21_statutes:
            statutes_text = (
                f"The case refers to {statute}, and to {rule21} of Schedule 1 "
                f"to the Employment Tribunals (Constitution and Rules of "
                f"Procedure) Regulations 2013."
            )
        precedents_text = (
            f"The decision refers to {_PRECEDENTS[i % len(_PRECEDENTS)]}."
            if i % 2
            else _ABSENT_PRECEDENTS
        )
        if case_id in roles.contributory:
            general = (
                f"The complaint of {claims[0]} succeeded, subject to a "
                f"reduction of one quarter to reflect the claimant's "
                f"contributory conduct."
            )
        elif case_id in roles.legit_other:
            general = (
                "The tribunal gave directions for the collection of further "
                "evidence and made no decision on the complaints."
            )
        elif label == "claimant wins":
            general = (
                f"The tribunal upheld the complaints and the respondent was "
                f"directed to pay the claimant £{amount}."
            )
        elif label == "claimant loses":
            general = "The tribunal dismissed all of the complaints."
        else:
            general = (
                f"The tribunal upheld the complaint of {claims[0]} but "
                f"dismissed the complaint of {claims[1]}."
            )
        if case_id in roles.legit_other:
            remedies = "No remedies were ordered at this stage."
        elif label == "claimant loses":
            remedies = "No order is made."
        else:
            remedies = (
                f"The respondent must pay the claimant £{amount} within "
                f"14 days of this judgment."
            )
        if case_id in roles.rule21_full:
            reasons = (
                f"No response having been presented, the tribunal determined "
                f"the complaint under {rule21} and found on the papers that "
                f"{finding}."
            )
        elif case_id in roles.legit_other:
            reasons = (
                "The available material did not permit a final determination "
                "and further evidence was required before deciding the "
                "complaints."
            )
        else:
            reasons = f"The tribunal found that {finding}."

    label_text = label[0].upper() + label[1:]
    if i % 2 == 0:
        label_section = f"'{label_text}'." if i % 4 == 0 else f'"{label_text}".'
    else:
        label_section = f"{label_text}."

    return {
        "facts": facts,
        "claims": claims_text,
        "statute_refs": statutes_text,
        "precedent_refs": precedents_text,
        "general_outcome": general,
        "outcome_label": label_section,
        "order_remedies": remedies,
        "reasons": reasons,
    }


def _render_response(sections: dict[str, str], i: int) -> str:
    if i % 2 == 0:
        claims_heading = (
            "Claims made in the specific court decision"
            if i % 4 == 0
            else "Claims made in the case"
        )
        reasons_heading = (
            "Essential reasons for the decision (procedural and substantive)"
            if i % 4 == 0
            else "Essential reasons for the decision"
        )
        parts = [
            f"1. Facts of the case: {sections['facts']}",
            f"2. {claims_heading}: {sections['claims']}",
            "3. References to legal statutes, acts, regulations, provisions "
            f"and rules: {sections['statute_refs']}",
            f"4. References to precedents and other court decisions: "
            f"{sections['precedent_refs']}",
            f"5. General case outcome: {sections['general_outcome']}",
            "6. General case outcome summarised using one of the following "
            f"four labels: {sections['outcome_label']}",
            f"7. Detailed order and remedies: {sections['order_remedies']}",
            f"8. {reasons_heading}: {sections['reasons']}",
        ]
        return "\n\n".join(parts) + "\n"
    parts = [
        f"- Facts of the case:** {sections['facts']}",
        f"- Claims made in the specific court decision:** {sections['claims']}",
        "- References to legal statutes, acts, regulations, provisions and "
        f"rules:** {sections['statute_refs']}",
        "- References to precedents and other court decisions:** "
        f"{sections['precedent_refs']}",
        f"- General case outcome:** {sections['general_outcome']}",
        f"- General case outcome summarised:** {sections['outcome_label']}",
        f"- Detailed order and remedies:** {sections['order_remedies']}",
        f"- Essential reasons for the decision:** {sections['reasons']}",
    ]
    return "\n".join(parts) + "\n"


def _annotation(case_id: str, i: int, roles: _Roles) -> QualityAnnotation:
    zeros = roles.zero_aspects(case_id)
    part1 = tuple(
        AspectScore(aspect=aspect, score=0 if aspect in zeros else 1)
        for aspect in (
            "facts", "claims", "statute_refs", "precedent_refs",
            "general_outcome", "outcome_label", "order_remedies", "reasons",
        )
    )
    suitable = 1 if case_id in roles.suitable else 0
    return QualityAnnotation(
        case_id=case_id,
        part1=part1,
        part2_suitable=suitable,
        part2_procedural=(
            (1 if case_id in roles.procedural else 0) if suitable else None
        ),
        annotator_id=ANNOTATOR_ID,
        annotated_at=f"2024-02-{i % 28 + 1:02d}T{9 + i % 8:02d}:{i % 60:02d}:00Z",
        notes="",
    )


def build_corpus(root: Path) -> list[CaseDocument]:
    corpus_dir = root / "corpus"
    corpus_dir.mkdir(parents=True, exist_ok=True)
    manifest: dict[str, dict] = {}
    docs: list[CaseDocument] = []
    for i, (case_id, pages) in enumerate(_case_ids_and_pages()):
        claimant, respondent = _party_names(i)
        body = _body_text(i, case_id, pages)
        meta = {
            "page_count": pages,
            "filing_date": f"{2016 + i % 6}-{i % 12 + 1:02d}-{i % 28 + 1:02d}",
            "decision_date": f"{2017 + i % 6}-{i % 12 + 1:02d}-{i % 28 + 1:02d}",
            "venue": _VENUES[i % len(_VENUES)],
            "jurisdiction_codes": [_JURISDICTIONS[i % len(_JURISDICTIONS)]],
            "judge": f"Employment Judge {_SURNAMES[(i * 5) % len(_SURNAMES)]}",
            "claimant": claimant,
            "respondent": respondent,
        }
        manifest[case_id] = meta
        (corpus_dir / f"{safe_filename(case_id)}.txt").write_text(
            body, encoding="utf-8"
        )
        docs.append(
            CaseDocument(
                case_id=case_id,
                body_text=body,
                page_count=pages,
                meta={k: v for k, v in meta.items() if k != "page_count"},
            )
        )
    (corpus_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    return docs


def build_all(root: str | Path) -> dict:
    """Generate the full fixture tree; returns a small summary dict."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    docs = build_corpus(root)
    by_id = {doc.case_id: doc for doc in docs}
    pages = {doc.case_id: doc.page_count for doc in docs}

    manifest = sample_manifest(docs, TABLE1_PLAN, SAMPLE_SEED)
    (root / "sample.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    sampled: list[str] = manifest["case_ids"]
    roles = _Roles(sampled, pages)

    responses_dir = root / "responses"
    responses_dir.mkdir(exist_ok=True)
    records_dir = root / "records"
    records_dir.mkdir(exist_ok=True)
    cache = ReplayCache(root / "cache")
    store = AnnotationStore(root / "annotations")
    registry = PromptRegistry()
    config = ModelConfig()

    index_of = {cid: i for i, cid in enumerate(sampled)}
    for case_id in sampled:
        i = index_of[case_id]
        sections = _sections(case_id, i, roles)
        response = _render_response(sections, i)
        (responses_dir / f"{safe_filename(case_id)}.txt").write_text(
            response, encoding="utf-8"
        )
        record = parse_extraction(case_id, response)
        if case_id in roles.suitable and leakage_check(record):
            raise AssertionError(f"fixture leakage in suitable case {case_id}")
        save_record(record, records_dir)
        request = build_request(
            registry, "uket-final", "v1", by_id[case_id], config
        )
        result = CompletionResult(
            raw_text=response,
            prompt_tokens=(len(request.system_text) + len(request.user_text)) // 4,
            completion_tokens=len(response) // 4,
            latency_ms=0.0,
            backend_tag="live",
        )
        cache.put(request, result)
        store.store(_annotation(case_id, i, roles), expected_version=0)

    return {
        "cases": len(docs),
        "sampled": len(sampled),
        "suitable": len(roles.suitable),
    }


def main(argv: list[str] | None = None) -> int:
    import argparse

    parser = argparse.ArgumentParser(description="Rebuild the reference fixture tree.")
    parser.add_argument("--out", type=Path, required=True)
    args = parser.parse_args(argv)
    summary = build_all(args.out)
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
