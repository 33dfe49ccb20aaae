// Wire types mirroring the review service API.

export const ASPECTS = [
  "facts",
  "claims",
  "statute_refs",
  "precedent_refs",
  "general_outcome",
  "outcome_label",
  "order_remedies",
  "reasons",
] as const;

export type Aspect = (typeof ASPECTS)[number];

export const ASPECT_TITLES: Record<Aspect, string> = {
  facts: "Facts of the case",
  claims: "Claims made",
  statute_refs: "References to legal statutes",
  precedent_refs: "References to precedents",
  general_outcome: "General case outcome",
  outcome_label: "Outcome label",
  order_remedies: "Detailed order and remedies",
  reasons: "Essential reasons",
};

export interface CaseListEntry {
  case_id: string;
  page_count: number | null;
  status: "pending" | "done";
  label: string | null;
}

export interface CaseListPage {
  items: CaseListEntry[];
  total: number;
  page: number;
  page_size: number;
}

export interface ExtractionRecordWire {
  case_id: string;
  facts: string;
  claims: string;
  statute_refs: string;
  precedent_refs: string;
  general_outcome: string;
  outcome_label: string;
  outcome_label_raw: string;
  order_remedies: string;
  reasons: string;
  absence_flags: Record<Aspect, boolean>;
}

export interface LintFindingWire {
  rule_id: string;
  severity: "warning" | "error";
  section: string;
  message: string;
}

export interface AnnotationWire {
  case_id: string;
  part1: Record<Aspect, 0 | 1>;
  part2_suitable: 0 | 1;
  part2_procedural?: 0 | 1;
  annotator_id: string;
  annotated_at: string;
  notes: string;
}

export interface CaseReviewView {
  case_id: string;
  body_text: string;
  page_count: number | null;
  record: ExtractionRecordWire | null;
  lint: LintFindingWire[];
  annotation: AnnotationWire | null;
  version: number;
  status: "pending" | "done";
}

export interface EstimateCellWire {
  successes: number;
  trials: number;
  p: number;
  half_width: number;
  cell: string;
}

export interface StatsTableRowWire {
  aspect: Aspect;
  all: EstimateCellWire;
  suitable: EstimateCellWire | null;
}

export interface StatsPayload {
  annotated: number;
  table: {
    all_trials: number;
    suitable_trials: number;
    rows: StatsTableRowWire[];
  } | null;
  suitability: {
    suitable_count: number;
    suitable_pct: number;
    multipage_count: number;
  } | null;
}

export interface Rubric {
  part1: Record<Aspect, string>;
  part2: { suitable: string; procedural: string };
  eligibility: Record<string, string>;
}
