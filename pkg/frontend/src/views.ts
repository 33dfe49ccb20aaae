// HTML renderers. Pure string builders so the layout is unit-testable;
// main.ts owns event wiring.

import {
  canSubmit,
  proceduralEnabled,
  type AnnotationFormState,
  type TriState,
} from "./form.js";
import {
  ASPECTS,
  ASPECT_TITLES,
  type Aspect,
  type CaseListPage,
  type CaseReviewView,
  type Rubric,
  type StatsPayload,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function scoreButton(
  aspect: Aspect,
  value: 0 | 1,
  current: TriState,
): string {
  const active = current === value ? " active" : "";
  const title = value === 1 ? "accurate" : "inaccurate";
  return (
    `<button class="score${active}" data-action="score" data-aspect="${aspect}" ` +
    `data-value="${value}" title="${title}">${value}</button>`
  );
}

export function renderCaseList(page: CaseListPage, filter: string): string {
  const rows = page.items
    .map((entry) => {
      const label = entry.label ? escapeHtml(entry.label) : "—";
      return (
        `<tr class="case-row ${entry.status}" data-action="open" ` +
        `data-case="${escapeHtml(entry.case_id)}">` +
        `<td>${escapeHtml(entry.case_id)}</td>` +
        `<td class="num">${entry.page_count ?? "?"}</td>` +
        `<td><span class="badge ${entry.status}">${entry.status}</span></td>` +
        `<td>${label}</td></tr>`
      );
    })
    .join("");
  const filters = (["pending", "done", "all"] as const)
    .map(
      (name) =>
        `<button class="filter${name === filter ? " active" : ""}" ` +
        `data-action="filter" data-status="${name}">${name}</button>`,
    )
    .join("");
  return `
<section class="case-list">
  <header class="list-header">
    <h2>Cases (${page.total})</h2>
    <div class="filters">${filters}</div>
  </header>
  <table>
    <thead><tr><th>case</th><th>pages</th><th>status</th><th>label</th></tr></thead>
    <tbody>${rows || '<tr><td colspan="4" class="empty">no cases</td></tr>'}</tbody>
  </table>
</section>`;
}

export function renderDashboard(stats: StatsPayload, totalSampled: number): string {
  const done = stats.annotated;
  const pct = totalSampled ? Math.round((100 * done) / totalSampled) : 0;
  let tableHtml = '<p class="empty">No annotations yet.</p>';
  if (stats.table) {
    const rows = stats.table.rows
      .map(
        (row) =>
          `<tr><td>${escapeHtml(ASPECT_TITLES[row.aspect] ?? row.aspect)}</td>` +
          `<td class="num">${escapeHtml(row.all.cell)}</td>` +
          `<td class="num">${row.suitable ? escapeHtml(row.suitable.cell) : "—"}</td></tr>`,
      )
      .join("");
    const suit = stats.suitability;
    const suitLine = suit
      ? `<p class="suitability">${suit.suitable_count} suitable ` +
        `(${suit.suitable_pct}%), ${suit.multipage_count} over one page</p>`
      : "";
    tableHtml = `
  <table class="accuracy">
    <thead><tr><th>aspect</th><th>all cases</th><th>suitable-only</th></tr></thead>
    <tbody>${rows}</tbody>
  </table>${suitLine}`;
  }
  return `
<section class="dashboard">
  <h2>Progress</h2>
  <div class="progress"><div class="bar" style="width:${pct}%"></div></div>
  <p>${done} annotated / ${totalSampled - done} pending (${pct}%)</p>
  ${tableHtml}
</section>`;
}

function sectionCard(
  view: CaseReviewView,
  aspect: Aspect,
  form: AnnotationFormState,
  rubric: Rubric | null,
): string {
  const record = view.record;
  const text =
    aspect === "outcome_label"
      ? (record?.outcome_label_raw ?? "")
      : ((record?.[aspect] as string | undefined) ?? "");
  const absent = record?.absence_flags?.[aspect]
    ? '<span class="chip absent">absence marker</span>'
    : "";
  const findings = view.lint
    .filter((finding) => finding.section === aspect)
    .map(
      (finding) =>
        `<div class="lint ${finding.severity}">` +
        `<strong>${finding.rule_id}</strong> ${escapeHtml(finding.message)}</div>`,
    )
    .join("");
  const rubricText = rubric?.part1[aspect]
    ? `<details class="rubric"><summary>rubric</summary>` +
      `<p>${escapeHtml(rubric.part1[aspect])}</p></details>`
    : "";
  const shortcut = ASPECTS.indexOf(aspect) + 1;
  return `
  <article class="section" data-section="${aspect}">
    <header>
      <h3>${escapeHtml(ASPECT_TITLES[aspect])} <kbd>${shortcut}</kbd></h3>
      <div class="score-group">
        ${scoreButton(aspect, 1, form.scores[aspect])}
        ${scoreButton(aspect, 0, form.scores[aspect])}
      </div>
    </header>
    ${findings}
    <p class="section-text">${escapeHtml(text)} ${absent}</p>
    ${rubricText}
  </article>`;
}

function part2Controls(form: AnnotationFormState, rubric: Rubric | null): string {
  const procedural = proceduralEnabled(form);
  const suitButton = (value: 0 | 1) =>
    `<button class="score${form.suitability === value ? " active" : ""}" ` +
    `data-action="suitability" data-value="${value}">${value}</button>`;
  const procButton = (value: 0 | 1) =>
    `<button class="score${form.procedural === value ? " active" : ""}" ` +
    `data-action="procedural" data-value="${value}"` +
    `${procedural ? "" : " disabled"}>${value}</button>`;
  const suitRubric = rubric
    ? `<details class="rubric"><summary>rubric</summary>` +
      `<p>${escapeHtml(rubric.part2.suitable)}</p></details>`
    : "";
  const procRubric = rubric
    ? `<details class="rubric"><summary>rubric</summary>` +
      `<p>${escapeHtml(rubric.part2.procedural)}</p></details>`
    : "";
  return `
  <article class="section part2">
    <header><h3>Suitable for prediction <kbd>s</kbd></h3>
      <div class="score-group">${suitButton(1)}${suitButton(0)}</div>
    </header>${suitRubric}
  </article>
  <article class="section part2${procedural ? "" : " disabled"}" id="procedural-control">
    <header><h3>Dominated by procedural events <kbd>p</kbd></h3>
      <div class="score-group">${procButton(1)}${procButton(0)}</div>
    </header>
    ${procedural ? "" : '<p class="hint">enabled when the case is marked suitable</p>'}
    ${procRubric}
  </article>`;
}

export function renderReviewScreen(
  view: CaseReviewView,
  form: AnnotationFormState,
  rubric: Rubric | null,
  message = "",
): string {
  const sections = ASPECTS.map((aspect) =>
    sectionCard(view, aspect, form, rubric),
  ).join("");
  const submitDisabled = canSubmit(form) ? "" : " disabled";
  const dirty = form.dirty ? '<span class="chip dirty">unsaved</span>' : "";
  return `
<section class="review" data-case="${escapeHtml(view.case_id)}">
  <header class="review-header">
    <button data-action="back">&larr; cases</button>
    <h2>${escapeHtml(view.case_id)}</h2>
    <span class="meta">${view.page_count ?? "?"} page(s) · v${form.serverVersion} ${dirty}</span>
    <button id="submit" data-action="submit"${submitDisabled}>Save annotation</button>
  </header>
  ${message ? `<div class="banner">${message}</div>` : ""}
  <div class="panes">
    <div class="pane left">
      <input id="search" type="search" placeholder="search judgment text" />
      <pre id="body-text">${escapeHtml(view.body_text)}</pre>
    </div>
    <div class="pane right">
      ${sections}
      ${part2Controls(form, rubric)}
    </div>
  </div>
</section>`;
}

export function renderConflictDialog(currentVersion: number): string {
  return `
<div class="dialog-backdrop" id="conflict-dialog">
  <div class="dialog">
    <h3>Annotation changed on the server</h3>
    <p>Someone saved version ${currentVersion} while you were editing.
       Reload to see the newer annotation; your unsaved scores will be lost.</p>
    <div class="dialog-actions">
      <button data-action="conflict-reload">Reload newer version</button>
      <button data-action="conflict-dismiss">Keep editing</button>
    </div>
  </div>
</div>`;
}

export function renderInvalid(violations: string[]): string {
  const items = violations.map((v) => `<li>${escapeHtml(v)}</li>`).join("");
  return `<div class="banner error"><strong>Rejected by the server:</strong><ul>${items}</ul></div>`;
}
