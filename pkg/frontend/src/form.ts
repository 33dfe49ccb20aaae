// Annotation form state: eight tri-state accuracy controls plus the
// gated two-part suitability/procedural pair. Pure functions; the DOM
// layer renders whatever this module says.

import { ASPECTS, type AnnotationWire, type Aspect } from "./types.js";

export type TriState = 0 | 1 | null;

export interface AnnotationFormState {
  caseId: string;
  scores: Record<Aspect, TriState>;
  suitability: TriState;
  procedural: TriState;
  dirty: boolean;
  serverVersion: number;
  annotatorId: string;
  notes: string;
}

function blankScores(): Record<Aspect, TriState> {
  return Object.fromEntries(ASPECTS.map((a) => [a, null])) as Record<
    Aspect,
    TriState
  >;
}

export function newForm(
  caseId: string,
  serverVersion: number,
  annotatorId: string,
): AnnotationFormState {
  return {
    caseId,
    scores: blankScores(),
    suitability: null,
    procedural: null,
    dirty: false,
    serverVersion,
    annotatorId,
    notes: "",
  };
}

export function formFromAnnotation(
  annotation: AnnotationWire,
  serverVersion: number,
): AnnotationFormState {
  const scores = blankScores();
  for (const aspect of ASPECTS) {
    const score = annotation.part1[aspect];
    if (score === 0 || score === 1) scores[aspect] = score;
  }
  return {
    caseId: annotation.case_id,
    scores,
    suitability: annotation.part2_suitable,
    procedural:
      annotation.part2_suitable === 1 ? (annotation.part2_procedural ?? null) : null,
    dirty: false,
    serverVersion,
    annotatorId: annotation.annotator_id,
    notes: annotation.notes,
  };
}

export function setScore(
  state: AnnotationFormState,
  aspect: Aspect,
  value: 0 | 1,
): AnnotationFormState {
  return { ...state, scores: { ...state.scores, [aspect]: value }, dirty: true };
}

// Shortcut semantics: first press marks accurate, further presses flip.
export function toggleScore(
  state: AnnotationFormState,
  aspect: Aspect,
): AnnotationFormState {
  const current = state.scores[aspect];
  return setScore(state, aspect, current === 1 ? 0 : 1);
}

export function setSuitability(
  state: AnnotationFormState,
  value: 0 | 1,
): AnnotationFormState {
  return {
    ...state,
    suitability: value,
    // The procedural control only exists for suitable cases.
    procedural: value === 1 ? state.procedural : null,
    dirty: true,
  };
}

export function proceduralEnabled(state: AnnotationFormState): boolean {
  return state.suitability === 1;
}

export function setProcedural(
  state: AnnotationFormState,
  value: 0 | 1,
): AnnotationFormState {
  if (!proceduralEnabled(state)) return state;
  return { ...state, procedural: value, dirty: true };
}

export function canSubmit(state: AnnotationFormState): boolean {
  const allScored = ASPECTS.every((a) => state.scores[a] !== null);
  if (!allScored || state.suitability === null) return false;
  return state.suitability === 0 || state.procedural !== null;
}

// Builds the wire annotation; only callable for submittable states, so the
// payload can never violate the server's gating rule.
export function toPayload(state: AnnotationFormState): AnnotationWire {
  if (!canSubmit(state)) {
    throw new Error("form is incomplete");
  }
  const part1 = Object.fromEntries(
    ASPECTS.map((a) => [a, state.scores[a] as 0 | 1]),
  ) as Record<Aspect, 0 | 1>;
  const payload: AnnotationWire = {
    case_id: state.caseId,
    part1,
    part2_suitable: state.suitability as 0 | 1,
    annotator_id: state.annotatorId,
    annotated_at: new Date().toISOString(),
    notes: state.notes,
  };
  if (state.suitability === 1) {
    payload.part2_procedural = state.procedural as 0 | 1;
  }
  return payload;
}

// Keyboard map: 1..8 toggle the aspect scores, "s" cycles suitability,
// "p" cycles the procedural flag while enabled.
export function applyShortcut(
  state: AnnotationFormState,
  key: string,
): AnnotationFormState {
  const index = "12345678".indexOf(key);
  if (index >= 0) {
    return toggleScore(state, ASPECTS[index]);
  }
  if (key === "s") {
    return setSuitability(state, state.suitability === 1 ? 0 : 1);
  }
  if (key === "p" && proceduralEnabled(state)) {
    return setProcedural(state, state.procedural === 1 ? 0 : 1);
  }
  return state;
}
