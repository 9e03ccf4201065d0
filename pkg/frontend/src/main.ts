/** Single-page what-if client: donor form, per-model gauges, sweep chart,
 * and report panels, all fed exclusively by the prediction service. */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import { LatestWinsScheduler } from "./debounce.js";
import {
  renderErrorBanner,
  renderImportance,
  renderInference,
  renderPlaceholder,
  renderPredictionView,
  renderWhatIfChart,
} from "./render.js";
import type { ModelKind, PredictionResponse, WhatIfRequest, WhatIfResponse } from "./types.js";
import { MODEL_KINDS, MODEL_LABELS } from "./types.js";
import {
  FIELD_SPECS,
  SWEEPABLE_FIELDS,
  buildRecord,
  fieldSpec,
  formIsValid,
  validateField,
  validateSweep,
  type FieldState,
} from "./validation.js";

export interface AppOptions {
  debounceMs?: number;
  /** Skip the initial predict/whatif/report fetches (used by tests). */
  autoload?: boolean;
}

export interface AppHandle {
  root: HTMLElement;
  loadReports(): Promise<void>;
  predictNow(): Promise<void>;
}

function html(root: HTMLElement): void {
  root.innerHTML = `
    <header>
      <h1>Kidney offer decision support</h1>
      <p class="subtitle">Transplant-vs-discard probabilities for a procured deceased-donor kidney.</p>
    </header>
    <div id="error-banner"></div>
    <section id="form-section">
      <h2>Donor characteristics</h2>
      <form id="donor-form"></form>
      <button id="predict-btn" type="button">Predict</button>
      <span id="form-hint">blank fields are imputed from training data</span>
    </section>
    <section id="models-section">
      <h2>Models</h2>
      <nav id="model-tabs"></nav>
      <div id="prediction-view"></div>
    </section>
    <section id="whatif-section">
      <h2>What-if sweep</h2>
      <div id="sweep-controls">
        <label>feature <select id="sweep-feature"></select></label>
        <label>from <input id="sweep-lo" type="number" value="0"></label>
        <label>to <input id="sweep-hi" type="number" value="1"></label>
        <label>steps <input id="sweep-steps" type="number" value="11" min="2"></label>
      </div>
      <div id="whatif-message" class="field-message"></div>
      <div id="whatif-chart"></div>
    </section>
    <section id="reports-section">
      <h2>Model reports</h2>
      <h3>Feature importance (forest, OOB permutation)</h3>
      <div id="importance-panel"></div>
      <h3>Logistic inference</h3>
      <div id="inference-panel"></div>
    </section>
  `;
}

function buildForm(form: HTMLFormElement): void {
  const doc = form.ownerDocument;
  for (const spec of FIELD_SPECS) {
    const row = doc.createElement("div");
    row.className = "field-row";
    const unit = spec.unit ? ` (${spec.unit})` : "";
    row.innerHTML = `
      <label for="field-${spec.name}">${spec.label}${unit}</label>
      <input id="field-${spec.name}" name="${spec.name}" inputmode="decimal" autocomplete="off">
      <input type="range" data-field="${spec.name}" min="${spec.min}" max="${spec.sliderMax}"
             step="${spec.step}" value="${spec.min}">
      <span class="field-message" data-field="${spec.name}"></span>
    `;
    form.appendChild(row);
  }
}

export function initApp(root: HTMLElement, client: ApiClient, options: AppOptions = {}): AppHandle {
  const doc = root.ownerDocument;
  html(root);
  const form = root.querySelector<HTMLFormElement>("#donor-form")!;
  buildForm(form);

  const banner = root.querySelector<HTMLElement>("#error-banner")!;
  const predictionView = root.querySelector<HTMLElement>("#prediction-view")!;
  const chart = root.querySelector<HTMLElement>("#whatif-chart")!;
  const whatifMessage = root.querySelector<HTMLElement>("#whatif-message")!;
  const predictBtn = root.querySelector<HTMLButtonElement>("#predict-btn")!;
  const tabs = root.querySelector<HTMLElement>("#model-tabs")!;
  const sweepFeature = root.querySelector<HTMLSelectElement>("#sweep-feature")!;
  const sweepLo = root.querySelector<HTMLInputElement>("#sweep-lo")!;
  const sweepHi = root.querySelector<HTMLInputElement>("#sweep-hi")!;
  const sweepSteps = root.querySelector<HTMLInputElement>("#sweep-steps")!;

  for (const spec of SWEEPABLE_FIELDS) {
    const option = doc.createElement("option");
    option.value = spec.name;
    option.textContent = spec.label;
    sweepFeature.appendChild(option);
  }
  sweepFeature.value = "per_kdpi";

  let selectedModel: ModelKind = "gradient_boosting";
  let lastPrediction: PredictionResponse | null = null;
  let lastSweep: WhatIfResponse | null = null;
  const fieldStates = new Map<string, FieldState>(
    FIELD_SPECS.map((spec) => [spec.name, validateField(spec, "")]),
  );

  for (const kind of MODEL_KINDS) {
    const tab = doc.createElement("button");
    tab.type = "button";
    tab.className = "model-tab";
    tab.dataset.model = kind;
    tab.textContent = MODEL_LABELS[kind];
    if (kind === selectedModel) tab.classList.add("active");
    tab.addEventListener("click", () => {
      selectedModel = kind;
      tabs.querySelectorAll(".model-tab").forEach((t) => t.classList.remove("active"));
      tab.classList.add("active");
      renderPredictionView(predictionView, lastPrediction, selectedModel);
      renderWhatIfChart(chart, lastSweep, selectedModel);
    });
    tabs.appendChild(tab);
  }

  function syncFieldValidity(name: string): void {
    const state = fieldStates.get(name)!;
    const message = root.querySelector<HTMLElement>(`.field-message[data-field="${name}"]`)!;
    message.textContent = state.message;
    const input = root.querySelector<HTMLInputElement>(`#field-${name}`)!;
    input.classList.toggle("invalid", !state.valid);
    predictBtn.disabled = !formIsValid(fieldStates.values());
  }

  async function runPredict(): Promise<void> {
    if (!formIsValid(fieldStates.values())) return;
    try {
      lastPrediction = await client.predict(buildRecord(fieldStates));
      renderErrorBanner(banner, null);
      renderPredictionView(predictionView, lastPrediction, selectedModel);
    } catch (error) {
      lastPrediction = null;
      renderPredictionView(predictionView, null, selectedModel); // no stale gauge
      const message =
        error instanceof ApiError ? error.message : "prediction service unreachable";
      renderErrorBanner(banner, message);
    }
  }

  async function runWhatIf(request: WhatIfRequest): Promise<void> {
    try {
      lastSweep = await client.whatif(request);
      whatifMessage.textContent = "";
      renderWhatIfChart(chart, lastSweep, selectedModel);
    } catch (error) {
      lastSweep = null;
      renderWhatIfChart(chart, null, selectedModel);
      const message =
        error instanceof ApiError ? error.message : "prediction service unreachable";
      renderErrorBanner(banner, message);
    }
  }

  const sweepScheduler = new LatestWinsScheduler<WhatIfRequest>(
    runWhatIf,
    options.debounceMs ?? 250,
  );

  function currentSweepRequest(): WhatIfRequest | null {
    if (!formIsValid(fieldStates.values())) return null;
    const lo = Number(sweepLo.value);
    const hi = Number(sweepHi.value);
    const steps = Number(sweepSteps.value);
    const check = validateSweep(sweepFeature.value, lo, hi, steps);
    whatifMessage.textContent = check.message;
    if (!check.ok) return null;
    return { record: buildRecord(fieldStates), feature: sweepFeature.value, lo, hi, steps };
  }

  function scheduleSweep(): void {
    const request = currentSweepRequest();
    if (request !== null) sweepScheduler.request(request);
  }

  form.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    if (target.type === "range") {
      const name = target.dataset.field!;
      const input = root.querySelector<HTMLInputElement>(`#field-${name}`)!;
      input.value = target.value;
      fieldStates.set(name, validateField(fieldSpec(name), target.value));
      syncFieldValidity(name);
      scheduleSweep(); // dragging re-issues the sweep, debounced latest-wins
    } else if (target.name) {
      fieldStates.set(target.name, validateField(fieldSpec(target.name), target.value));
      syncFieldValidity(target.name);
    }
  });

  predictBtn.addEventListener("click", () => void runPredict());
  for (const control of [sweepFeature, sweepLo, sweepHi, sweepSteps]) {
    control.addEventListener("input", () => {
      if (control === sweepFeature) {
        const spec = fieldSpec(sweepFeature.value);
        sweepLo.value = String(spec.min);
        sweepHi.value = String(spec.max ?? spec.sliderMax);
      }
      scheduleSweep();
    });
  }

  async function loadReports(): Promise<void> {
    const importancePanel = root.querySelector<HTMLElement>("#importance-panel")!;
    const inferencePanel = root.querySelector<HTMLElement>("#inference-panel")!;
    try {
      renderImportance(importancePanel, await client.importance());
    } catch {
      renderPlaceholder(importancePanel, "feature importance unavailable");
    }
    try {
      renderInference(inferencePanel, await client.inference());
    } catch {
      renderPlaceholder(inferencePanel, "inference table unavailable");
    }
  }

  if (options.autoload !== false) {
    void loadReports();
    void runPredict();
    const request = currentSweepRequest();
    if (request !== null) sweepScheduler.fireNow(request);
  }

  return { root, loadReports, predictNow: runPredict };
}
