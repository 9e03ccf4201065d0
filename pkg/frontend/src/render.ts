/** Pure DOM renderers: same payload in, same pixels out.
 *
 * Every displayed number is copied from an API payload (formatting only);
 * full-precision values ride along in data attributes so tests can assert
 * display/payload parity without re-deriving anything client-side.
 */

import { formatInference, formatInterval, formatProbability } from "./format.js";
import type {
  ImportanceEntry,
  InferenceRow,
  ModelKind,
  PredictionResponse,
  WhatIfResponse,
} from "./types.js";
import { MODEL_KINDS, MODEL_LABELS } from "./types.js";

function clear(container: HTMLElement): void {
  container.textContent = "";
}

function el<K extends keyof HTMLElementTagNameMap>(
  container: HTMLElement,
  tag: K,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = container.ownerDocument.createElement(tag);
  if (className) node.className = className;
  container.appendChild(node);
  return node;
}

export function renderErrorBanner(container: HTMLElement, message: string | null): void {
  clear(container);
  if (message === null) return;
  const banner = el(container, "div", "error-banner");
  banner.setAttribute("role", "alert");
  banner.textContent = message;
}

/** Probability gauge and decision badge per model; null clears the view so
 * a failed request never leaves a stale gauge behind. */
export function renderPredictionView(
  container: HTMLElement,
  response: PredictionResponse | null,
  selectedModel: ModelKind,
): void {
  clear(container);
  if (response === null) return;
  for (const kind of MODEL_KINDS) {
    const prediction = response.predictions[kind];
    if (!prediction) continue;
    const card = el(container, "div", "model-card");
    card.dataset.model = kind;
    if (kind === selectedModel) card.classList.add("selected");
    if (kind === response.primary_model) card.classList.add("primary");

    const title = el(card, "h3");
    title.textContent =
      MODEL_LABELS[kind] + (kind === response.primary_model ? " ★" : "");

    const gauge = el(card, "div", "gauge");
    const fill = el(gauge, "div", "gauge-fill");
    fill.style.width = `${Math.round(prediction.probability * 100)}%`;
    const value = el(card, "span", "gauge-value");
    value.textContent = formatProbability(prediction.probability);
    value.dataset.probability = String(prediction.probability);

    const badge = el(card, "span", "decision-badge");
    badge.classList.add(prediction.transplant_likely ? "positive" : "negative");
    badge.textContent = prediction.transplant_likely ? "TRANSPLANT-LIKELY" : "DISCARD-LIKELY";
  }
  const note = el(container, "p", "threshold-note");
  note.textContent = `decision threshold ${formatProbability(response.threshold)}`;
}

const CHART_WIDTH = 640;
const CHART_HEIGHT = 300;
const MARGIN = { left: 44, right: 16, top: 12, bottom: 28 };

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl(doc: Document, tag: string, attrs: Record<string, string>): Element {
  const node = doc.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  return node;
}

/** Line chart of probability vs swept value, one series per model.
 * The x axis spans exactly [lo, hi]; a degenerate lo = hi sweep renders as
 * a flat line at mid-chart. */
export function renderWhatIfChart(
  container: HTMLElement,
  sweep: WhatIfResponse | null,
  selectedModel: ModelKind,
): void {
  clear(container);
  if (sweep === null) return;
  const doc = container.ownerDocument;
  const svg = svgEl(doc, "svg", {
    viewBox: `0 0 ${CHART_WIDTH} ${CHART_HEIGHT}`,
    width: String(CHART_WIDTH),
    height: String(CHART_HEIGHT),
    class: "whatif-chart",
  });
  svg.setAttribute("data-lo", String(sweep.lo));
  svg.setAttribute("data-hi", String(sweep.hi));
  container.appendChild(svg);

  const plotW = CHART_WIDTH - MARGIN.left - MARGIN.right;
  const plotH = CHART_HEIGHT - MARGIN.top - MARGIN.bottom;
  const span = sweep.hi - sweep.lo;
  const xPos = (v: number) =>
    MARGIN.left + (span === 0 ? plotW / 2 : ((v - sweep.lo) / span) * plotW);
  const yPos = (p: number) => MARGIN.top + (1 - p) * plotH;

  svg.appendChild(svgEl(doc, "line", {
    x1: String(MARGIN.left), y1: String(MARGIN.top + plotH),
    x2: String(MARGIN.left + plotW), y2: String(MARGIN.top + plotH),
    class: "axis",
  }));
  svg.appendChild(svgEl(doc, "line", {
    x1: String(MARGIN.left), y1: String(MARGIN.top),
    x2: String(MARGIN.left), y2: String(MARGIN.top + plotH),
    class: "axis",
  }));
  const loLabel = svgEl(doc, "text", {
    x: String(MARGIN.left), y: String(CHART_HEIGHT - 8), class: "axis-label",
  });
  loLabel.textContent = String(sweep.lo);
  svg.appendChild(loLabel);
  const hiLabel = svgEl(doc, "text", {
    x: String(MARGIN.left + plotW), y: String(CHART_HEIGHT - 8),
    class: "axis-label", "text-anchor": "end",
  });
  hiLabel.textContent = String(sweep.hi);
  svg.appendChild(hiLabel);

  for (const kind of MODEL_KINDS) {
    const series = svgEl(doc, "g", { class: "series", "data-model": kind });
    if (kind === selectedModel) series.setAttribute("data-selected", "true");
    const coords = sweep.points.map((point) => {
      const p = point.probabilities[kind];
      return { x: xPos(point.value), y: yPos(p), value: point.value, p };
    });
    series.appendChild(svgEl(doc, "polyline", {
      points: coords.map((c) => `${c.x},${c.y}`).join(" "),
      fill: "none",
      class: "series-line",
    }));
    for (const c of coords) {
      const dot = svgEl(doc, "circle", {
        cx: String(c.x), cy: String(c.y), r: kind === selectedModel ? "4" : "2.5",
        class: "series-point",
      });
      dot.setAttribute("data-value", String(c.value));
      dot.setAttribute("data-probability", String(c.p));
      series.appendChild(dot);
    }
    svg.appendChild(series);
  }
}

export function renderPlaceholder(container: HTMLElement, message: string): void {
  clear(container);
  const panel = el(container, "div", "placeholder-panel");
  panel.textContent = message;
}

/** Importance bar chart, bars sorted by descending importance. */
export function renderImportance(container: HTMLElement, entries: ImportanceEntry[] | null): void {
  clear(container);
  if (entries === null) {
    renderPlaceholder(container, "feature importance unavailable");
    return;
  }
  const ordered = [...entries].sort((a, b) => a.rank - b.rank);
  const maxImportance = Math.max(...ordered.map((e) => e.importance), 0);
  for (const entry of ordered) {
    const row = el(container, "div", "importance-row");
    row.dataset.feature = entry.feature;
    const label = el(row, "span", "importance-label");
    label.textContent = `${entry.rank}. ${entry.feature}`;
    const track = el(row, "div", "importance-track");
    const bar = el(track, "div", "importance-bar");
    const fraction = maxImportance > 0 ? Math.max(entry.importance, 0) / maxImportance : 0;
    bar.style.width = `${(fraction * 100).toFixed(1)}%`;
    bar.dataset.importance = String(entry.importance);
    const value = el(row, "span", "importance-value");
    value.textContent = formatInference(entry.importance);
  }
}

/** Coefficient table; rows with p < 0.05 carry the "significant" mark. */
export function renderInference(container: HTMLElement, rows: InferenceRow[] | null): void {
  clear(container);
  if (rows === null) {
    renderPlaceholder(container, "inference table unavailable");
    return;
  }
  const table = el(container, "table", "inference-table");
  const head = el(table, "thead");
  const headRow = el(head, "tr");
  for (const title of ["Features", "P value", "Confidence Interval at 95%", "Odds Ratio"]) {
    const cell = el(headRow, "th");
    cell.textContent = title;
  }
  const body = el(table, "tbody");
  for (const row of rows) {
    const tr = el(body, "tr");
    tr.dataset.feature = row.feature;
    tr.dataset.p = String(row.p_value);
    if (row.important) tr.classList.add("significant");
    const name = el(tr, "td");
    name.textContent = row.feature + (row.important ? " *" : "");
    const p = el(tr, "td");
    p.textContent = formatInference(row.p_value);
    const ci = el(tr, "td");
    ci.textContent = formatInterval(row.ci_low, row.ci_high);
    const oddsRatio = el(tr, "td");
    oddsRatio.textContent = formatInference(row.odds_ratio);
    oddsRatio.dataset.oddsRatio = String(row.odds_ratio);
  }
  const legend = el(container, "p", "table-legend");
  legend.textContent = "* p < 0.05";
}
