// Application wiring: hash routing, event delegation, keyboard shortcuts.

import {
  getCase,
  getRubric,
  getStats,
  listCases,
  putAnnotation,
} from "./api.js";
import {
  applyShortcut,
  canSubmit,
  formFromAnnotation,
  newForm,
  setProcedural,
  setScore,
  setSuitability,
  toPayload,
  type AnnotationFormState,
} from "./form.js";
import type { Aspect, CaseReviewView, Rubric } from "./types.js";
import {
  renderCaseList,
  renderConflictDialog,
  renderDashboard,
  renderInvalid,
  renderReviewScreen,
} from "./views.js";

const ANNOTATOR_ID = localStorage.getItem("annotator_id") ?? "annotator-1";

interface AppState {
  filter: "pending" | "done" | "all";
  view: CaseReviewView | null;
  form: AnnotationFormState | null;
  rubric: Rubric | null;
  banner: string;
}

const state: AppState = {
  filter: "pending",
  view: null,
  form: null,
  rubric: null,
  banner: "",
};

const app = document.getElementById("app") as HTMLElement;

async function showList(): Promise<void> {
  state.view = null;
  state.form = null;
  const [page, stats] = await Promise.all([
    listCases(state.filter),
    getStats(),
  ]);
  const all = await listCases("all", 1, 1);
  app.innerHTML =
    renderDashboard(stats, all.total) + renderCaseList(page, state.filter);
}

async function showCase(caseId: string): Promise<void> {
  if (!state.rubric) {
    state.rubric = await getRubric();
  }
  const view = await getCase(caseId);
  state.view = view;
  state.form = view.annotation
    ? formFromAnnotation(view.annotation, view.version)
    : newForm(view.case_id, view.version, ANNOTATOR_ID);
  state.banner = "";
  redrawCase();
}

function redrawCase(): void {
  if (!state.view || !state.form) return;
  app.innerHTML = renderReviewScreen(
    state.view,
    state.form,
    state.rubric,
    state.banner,
  );
}

async function openNextPending(): Promise<void> {
  const pending = await listCases("pending", 1, 1);
  if (pending.items.length > 0) {
    location.hash = `#/case/${pending.items[0].case_id}`;
  } else {
    location.hash = "#/cases";
  }
}

async function submit(): Promise<void> {
  if (!state.form || !canSubmit(state.form)) return;
  const result = await putAnnotation(
    state.form.caseId,
    toPayload(state.form),
    state.form.serverVersion,
  );
  if (result.kind === "saved") {
    state.banner = `Saved as version ${result.version}.`;
    await openNextPending();
  } else if (result.kind === "conflict") {
    document.body.insertAdjacentHTML(
      "beforeend",
      renderConflictDialog(result.currentVersion),
    );
  } else {
    state.banner = renderInvalid(result.violations);
    redrawCase();
  }
}

function searchBody(term: string): void {
  const pre = document.getElementById("body-text");
  if (!pre || !state.view) return;
  const text = state.view.body_text;
  if (!term) {
    pre.textContent = text;
    return;
  }
  const index = text.toLowerCase().indexOf(term.toLowerCase());
  pre.textContent = text;
  if (index >= 0) {
    const range = document.createRange();
    const node = pre.firstChild;
    if (node) {
      range.setStart(node, index);
      range.setEnd(node, index + term.length);
      const selection = window.getSelection();
      selection?.removeAllRanges();
      selection?.addRange(range);
      const lineHeight = 18;
      const lines = text.slice(0, index).split("\n").length;
      pre.scrollTop = Math.max(0, lines * lineHeight - 120);
    }
  }
}

function route(): void {
  const hash = location.hash || "#/cases";
  if (hash.startsWith("#/case/")) {
    void showCase(decodeURIComponent(hash.slice("#/case/".length)));
  } else {
    void showList();
  }
}

document.addEventListener("click", (event) => {
  const target = (event.target as HTMLElement).closest<HTMLElement>(
    "[data-action]",
  );
  if (!target || !(target instanceof HTMLElement)) return;
  const action = target.dataset.action;
  if (action === "open" && target.dataset.case) {
    location.hash = `#/case/${target.dataset.case}`;
  } else if (action === "filter") {
    state.filter = (target.dataset.status ?? "all") as AppState["filter"];
    void showList();
  } else if (action === "back") {
    location.hash = "#/cases";
  } else if (action === "score" && state.form) {
    state.form = setScore(
      state.form,
      target.dataset.aspect as Aspect,
      Number(target.dataset.value) as 0 | 1,
    );
    redrawCase();
  } else if (action === "suitability" && state.form) {
    state.form = setSuitability(
      state.form,
      Number(target.dataset.value) as 0 | 1,
    );
    redrawCase();
  } else if (action === "procedural" && state.form) {
    state.form = setProcedural(
      state.form,
      Number(target.dataset.value) as 0 | 1,
    );
    redrawCase();
  } else if (action === "submit") {
    void submit();
  } else if (action === "conflict-reload" && state.view) {
    document.getElementById("conflict-dialog")?.remove();
    void showCase(state.view.case_id);
  } else if (action === "conflict-dismiss") {
    document.getElementById("conflict-dialog")?.remove();
  }
});

document.addEventListener("keydown", (event) => {
  if (!state.form) return;
  const element = event.target as HTMLElement;
  if (element.tagName === "INPUT" || element.tagName === "TEXTAREA") return;
  if (event.key === "Enter" && (event.ctrlKey || event.metaKey)) {
    void submit();
    return;
  }
  const next = applyShortcut(state.form, event.key);
  if (next !== state.form) {
    state.form = next;
    redrawCase();
  }
});

document.addEventListener("input", (event) => {
  const target = event.target as HTMLInputElement;
  if (target.id === "search") {
    searchBody(target.value);
  }
});

window.addEventListener("hashchange", route);
route();
