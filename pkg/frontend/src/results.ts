/** Results view: bar presentation of criteria weights and alternative scores,
 * an overall-inconsistency badge, and a per-context consistency drill-down.
 * Every displayed number is taken verbatim from the service response. */

import type { ResultsPayload } from "./types.js";

export interface BarRow {
  id: string;
  label: string;
  /** raw service value, untouched */
  value: number;
  /** bar length relative to the largest row, in [0, 1] */
  fill: number;
  indent: number;
}

export interface ResultsView {
  theta: number;
  method: string;
  overallInconsistency: number;
  inconsistencyOk: boolean;
  criteria: BarRow[];
  alternatives: BarRow[];
  contexts: { id: string; cr: number; gate: boolean }[];
}

const GATE = 0.1;

/** Pure view model; the contract suite asserts its numbers === the payload's. */
export function buildResultsView(payload: ResultsPayload): ResultsView {
  const topCriteria = payload.global_weights.filter((w) => w.level === "criterion");
  const maxWeight = Math.max(...topCriteria.map((w) => w.weight));
  const maxScore = Math.max(...payload.alternative_scores.map((s) => s.score));
  return {
    theta: payload.theta,
    method: payload.method,
    overallInconsistency: payload.overall_inconsistency,
    inconsistencyOk: payload.overall_inconsistency <= GATE,
    criteria: topCriteria.map((w) => ({
      id: w.id, label: w.label, value: w.weight,
      fill: maxWeight > 0 ? w.weight / maxWeight : 0, indent: 0,
    })),
    alternatives: payload.alternative_scores.map((s) => ({
      id: s.id, label: s.label, value: s.score,
      fill: maxScore > 0 ? s.score / maxScore : 0, indent: 0,
    })),
    contexts: payload.contexts.map((c) => ({ id: c.id, cr: c.cr, gate: c.gate })),
  };
}

function barRow(row: BarRow): HTMLElement {
  const div = document.createElement("div");
  div.className = "bar-row";
  const label = document.createElement("span");
  label.className = "bar-label";
  label.textContent = row.label;
  const track = document.createElement("div");
  track.className = "bar-track";
  const fill = document.createElement("div");
  fill.className = "bar-fill";
  fill.style.width = `${(row.fill * 100).toFixed(1)}%`;
  track.appendChild(fill);
  const value = document.createElement("span");
  value.className = "bar-value";
  value.textContent = row.value.toFixed(3);
  div.append(label, track, value);
  return div;
}

export function renderResults(root: HTMLElement, payload: ResultsPayload): void {
  const view = buildResultsView(payload);
  root.replaceChildren();

  const badge = document.createElement("p");
  badge.className = view.inconsistencyOk ? "badge ok" : "badge warn";
  badge.textContent =
    `Overall inconsistency ${view.overallInconsistency.toFixed(3)}` +
    (view.inconsistencyOk ? "" : " — above the 0.1 gate");
  root.appendChild(badge);

  const criteriaHeading = document.createElement("h3");
  criteriaHeading.textContent = "Criteria weights";
  root.appendChild(criteriaHeading);
  for (const row of view.criteria) root.appendChild(barRow(row));

  const altHeading = document.createElement("h3");
  altHeading.textContent = "Alternative scores";
  root.appendChild(altHeading);
  for (const row of view.alternatives) root.appendChild(barRow(row));

  const drill = document.createElement("details");
  const summary = document.createElement("summary");
  summary.textContent = "Per-context consistency";
  drill.appendChild(summary);
  const list = document.createElement("ul");
  for (const ctx of view.contexts) {
    const item = document.createElement("li");
    item.className = ctx.gate ? "gate-pass" : "gate-fail";
    item.textContent = `${ctx.id}: CR ${ctx.cr.toFixed(3)} ${ctx.gate ? "pass" : "FAIL"}`;
    list.appendChild(item);
  }
  drill.appendChild(list);
  root.appendChild(drill);
}
