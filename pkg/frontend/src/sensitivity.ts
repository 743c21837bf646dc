/** Sensitivity explorer: a slider drives the perturbation weight t, score
 * lines are plotted over [0, 1], the ranking table follows the rank segment
 * containing t, and crossover markers are annotated with the pair that
 * swaps. Rendering between crossovers is linear interpolation of the
 * service's line coefficients; switching criteria re-fetches the report. */

import type { Client } from "./api.js";
import type { SensitivityPayload, SessionInfo } from "./types.js";
import { crossoverMarks, displayedRanking, linePoints, liveScores, scoreAt } from "./lines.js";

const WIDTH = 560;
const HEIGHT = 240;
const COLORS = ["#2563eb", "#dc2626", "#059669", "#9333ea", "#ea580c"];

const SVG_NS = "http://www.w3.org/2000/svg";

interface ExplorerState {
  report: SensitivityPayload;
  t: number;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string>): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, value);
  return el;
}

function chart(state: ExplorerState, labels: Map<string, string>): SVGSVGElement {
  const { report, t } = state;
  const maxScore = Math.max(
    ...report.lines.map((l) => Math.max(scoreAt(l, 0), scoreAt(l, 1))));
  const svg = svgElement("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "sensitivity-chart",
  });
  report.lines.forEach((line, idx) => {
    const poly = svgElement("polyline", {
      points: linePoints(line, WIDTH, HEIGHT, maxScore),
      fill: "none",
      stroke: COLORS[idx % COLORS.length],
      "stroke-width": "2",
    });
    const title = svgElement("title", {});
    title.textContent = labels.get(line.alternative) ?? line.alternative;
    poly.appendChild(title);
    svg.appendChild(poly);
  });
  for (const mark of crossoverMarks(report)) {
    const x = mark.t * WIDTH;
    svg.appendChild(svgElement("line", {
      x1: `${x}`, y1: "0", x2: `${x}`, y2: `${HEIGHT}`,
      stroke: mark.degenerate ? "#f59e0b" : "#9ca3af",
      "stroke-dasharray": "4 3",
    }));
    const text = svgElement("text", {
      x: `${Math.min(x + 4, WIDTH - 120)}`, y: "14", class: "marker-label",
    });
    text.textContent = mark.label;
    svg.appendChild(text);
  }
  const base = report.base_weight * WIDTH;
  svg.appendChild(svgElement("line", {
    x1: `${base}`, y1: "0", x2: `${base}`, y2: `${HEIGHT}`,
    stroke: "#111827", "stroke-width": "1",
  }));
  const cursor = t * WIDTH;
  svg.appendChild(svgElement("line", {
    x1: `${cursor}`, y1: "0", x2: `${cursor}`, y2: `${HEIGHT}`,
    stroke: "#2563eb", "stroke-width": "1.5",
  }));
  return svg;
}

function rankingTable(state: ExplorerState, labels: Map<string, string>): HTMLElement {
  const table = document.createElement("table");
  table.className = "ranking-table";
  const head = table.insertRow();
  for (const column of ["#", "alternative", "score"]) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  liveScores(state.report, state.t).forEach((entry, idx) => {
    const row = table.insertRow();
    row.insertCell().textContent = String(idx + 1);
    row.insertCell().textContent = labels.get(entry.alternative) ?? entry.alternative;
    row.insertCell().textContent = entry.score.toFixed(3);
  });
  return table;
}

export function renderSensitivity(root: HTMLElement, client: Client,
                                  info: SessionInfo): void {
  root.replaceChildren();
  const labels = new Map(info.alternatives.map((a) => [a.id, a.label]));

  const picker = document.createElement("select");
  for (const criterion of info.criteria) {
    const option = document.createElement("option");
    option.value = criterion.id;
    option.textContent = criterion.label;
    picker.appendChild(option);
  }
  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = "0";
  slider.max = "1";
  slider.step = "0.001";
  const readout = document.createElement("span");
  readout.className = "slider-readout";
  const reset = document.createElement("button");
  reset.textContent = "reset to base weight";
  const note = document.createElement("p");
  note.className = "sensitivity-note";
  const stage = document.createElement("div");

  const controls = document.createElement("div");
  controls.className = "sensitivity-controls";
  controls.append(picker, slider, readout, reset);
  root.append(controls, note, stage);

  let state: ExplorerState | null = null;

  const draw = () => {
    if (!state) return;
    readout.textContent = `t = ${state.t.toFixed(3)}`;
    stage.replaceChildren(chart(state, labels), rankingTable(state, labels));
    const ranking = displayedRanking(state.report, state.t);
    note.textContent = state.report.reversal_at_zero && state.t === 0
      ? `at t=0 the ranking is ${ranking.join(" > ")} (reversal vs base)`
      : `ranking: ${ranking.join(" > ")}`;
  };

  const load = async (criterion: string) => {
    const report = await client.sensitivity(info.id, criterion);
    state = { report, t: report.base_weight };
    slider.value = String(report.base_weight);
    draw();
  };

  picker.addEventListener("change", () => void load(picker.value));
  slider.addEventListener("input", () => {
    if (!state) return;
    state.t = Number(slider.value);
    draw();
  });
  reset.addEventListener("click", () => {
    if (!state) return;
    state.t = state.report.base_weight;
    slider.value = String(state.t);
    draw();
  });

  if (info.criteria.length > 0) void load(info.criteria[0].id);
}
