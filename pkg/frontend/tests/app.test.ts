import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiError, type ApiClient } from "../src/api.js";
import { initApp } from "../src/main.js";
import type { WhatIfRequest } from "../src/types.js";
import { IMPORTANCE_FIXTURE, INFERENCE_FIXTURE, makePrediction, makeSweep } from "./fixtures.js";

class StubClient implements ApiClient {
  predictCalls: Record<string, number>[] = [];
  whatifCalls: WhatIfRequest[] = [];
  failPredict: ApiError | null = null;
  failImportance = false;

  async predict(record: Record<string, number>) {
    this.predictCalls.push(record);
    if (this.failPredict) throw this.failPredict;
    return makePrediction({ gradient_boosting: 0.774 });
  }

  async whatif(request: WhatIfRequest) {
    this.whatifCalls.push(request);
    const values = Array.from(
      { length: request.steps },
      (_, i) => request.lo + ((request.hi - request.lo) * i) / (request.steps - 1),
    );
    return { ...makeSweep(values), feature: request.feature };
  }

  async importance() {
    if (this.failImportance) throw new ApiError(503, "not loaded");
    return IMPORTANCE_FIXTURE;
  }

  async inference() {
    return INFERENCE_FIXTURE;
  }
}

function setup(client: StubClient, autoload = false) {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const handle = initApp(root, client, { debounceMs: 100, autoload });
  return { root, handle };
}

function drag(root: HTMLElement, field: string, value: string) {
  const slider = root.querySelector<HTMLInputElement>(`input[type="range"][data-field="${field}"]`)!;
  slider.value = value;
  slider.dispatchEvent(new Event("input", { bubbles: true }));
}

describe("what-if slider", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => {
    vi.useRealTimers();
    document.body.innerHTML = "";
  });

  it("a drag burst issues exactly one request after the debounce window", async () => {
    const client = new StubClient();
    const { root } = setup(client);
    for (const v of ["30", "35", "40", "45", "50"]) drag(root, "age", v);
    expect(client.whatifCalls.length).toBe(0);
    await vi.advanceTimersByTimeAsync(100);
    expect(client.whatifCalls.length).toBe(1);
    expect(client.whatifCalls[0].record.age).toBe(50); // latest wins
    await vi.advanceTimersByTimeAsync(2000);
    expect(client.whatifCalls.length).toBe(1);
  });

  it("renders the sweep the service returned, values at full precision", async () => {
    const client = new StubClient();
    const { root } = setup(client);
    drag(root, "per_kdpi", "0.4");
    await vi.advanceTimersByTimeAsync(100);
    const dots = root.querySelectorAll('[data-model="gradient_boosting"] .series-point');
    expect(dots.length).toBe(11);
    const svg = root.querySelector("#whatif-chart svg")!;
    expect(Number(svg.getAttribute("data-lo"))).toBe(0);
    expect(Number(svg.getAttribute("data-hi"))).toBe(1);
  });

  it("invalid range input shows a message and sends nothing", async () => {
    const client = new StubClient();
    const { root } = setup(client);
    const lo = root.querySelector<HTMLInputElement>("#sweep-lo")!;
    lo.value = "0.9";
    const hi = root.querySelector<HTMLInputElement>("#sweep-hi")!;
    hi.value = "0.1";
    hi.dispatchEvent(new Event("input", { bubbles: true }));
    await vi.advanceTimersByTimeAsync(1000);
    expect(client.whatifCalls.length).toBe(0);
    expect(root.querySelector("#whatif-message")!.textContent).toContain("exceeds");
  });

  it("switching the sweep feature resets bounds to its domain", async () => {
    const client = new StubClient();
    const { root } = setup(client);
    const select = root.querySelector<HTMLSelectElement>("#sweep-feature")!;
    select.value = "per_gs";
    select.dispatchEvent(new Event("input", { bubbles: true }));
    expect(root.querySelector<HTMLInputElement>("#sweep-lo")!.value).toBe("0");
    expect(root.querySelector<HTMLInputElement>("#sweep-hi")!.value).toBe("100");
    await vi.advanceTimersByTimeAsync(100);
    expect(client.whatifCalls[0].feature).toBe("per_gs");
  });
});

describe("donor form and prediction view", () => {
  afterEach(() => {
    document.body.innerHTML = "";
  });

  it("disables submit while any field is invalid", () => {
    const client = new StubClient();
    const { root } = setup(client);
    const button = root.querySelector<HTMLButtonElement>("#predict-btn")!;
    expect(button.disabled).toBe(false);
    const age = root.querySelector<HTMLInputElement>("#field-age")!;
    age.value = "-5";
    age.dispatchEvent(new Event("input", { bubbles: true }));
    expect(button.disabled).toBe(true);
    expect(root.querySelector('.field-message[data-field="age"]')!.textContent).toContain("minimum");
    age.value = "55";
    age.dispatchEvent(new Event("input", { bubbles: true }));
    expect(button.disabled).toBe(false);
  });

  it("renders gauges from the payload after predict", async () => {
    const client = new StubClient();
    const { root, handle } = setup(client);
    const age = root.querySelector<HTMLInputElement>("#field-age")!;
    age.value = "55";
    age.dispatchEvent(new Event("input", { bubbles: true }));
    await handle.predictNow();
    expect(client.predictCalls[0]).toEqual({ age: 55 });
    const value = root.querySelector<HTMLElement>(
      '[data-model="gradient_boosting"] .gauge-value',
    )!;
    expect(value.textContent).toBe("0.77");
    expect(Number(value.dataset.probability)).toBe(0.774);
  });

  it("a 503 shows the banner, clears gauges, and preserves the form", async () => {
    const client = new StubClient();
    const { root, handle } = setup(client);
    const age = root.querySelector<HTMLInputElement>("#field-age")!;
    age.value = "55";
    age.dispatchEvent(new Event("input", { bubbles: true }));
    await handle.predictNow();
    expect(root.querySelectorAll(".gauge-value").length).toBe(4);

    client.failPredict = new ApiError(503, "model artifacts are not loaded yet");
    await handle.predictNow();
    expect(root.querySelector(".error-banner")!.textContent).toContain("not loaded");
    expect(root.querySelectorAll(".gauge-value").length).toBe(0); // no stale gauge
    expect(root.querySelector<HTMLInputElement>("#field-age")!.value).toBe("55");
  });

  it("tab clicks re-render from cached payloads without new requests", async () => {
    const client = new StubClient();
    const { root, handle } = setup(client);
    await handle.predictNow();
    const before = client.predictCalls.length;
    const tab = root.querySelector<HTMLButtonElement>('.model-tab[data-model="naive_bayes"]')!;
    tab.click();
    expect(client.predictCalls.length).toBe(before);
    expect(
      root.querySelector('.model-card[data-model="naive_bayes"]')!.classList.contains("selected"),
    ).toBe(true);
  });
});

describe("report panels", () => {
  afterEach(() => {
    document.body.innerHTML = "";
  });

  it("loads importance bars and the inference table", async () => {
    const client = new StubClient();
    const { root, handle } = setup(client);
    await handle.loadReports();
    expect(root.querySelectorAll("#importance-panel .importance-row").length).toBe(7);
    const age = root.querySelector('#inference-panel tr[data-feature="age"]')!;
    expect(age.classList.contains("significant")).toBe(true);
  });

  it("shows a placeholder when an endpoint fails", async () => {
    const client = new StubClient();
    client.failImportance = true;
    const { root, handle } = setup(client);
    await handle.loadReports();
    expect(root.querySelector("#importance-panel .placeholder-panel")).not.toBeNull();
    expect(root.querySelectorAll("#inference-panel tr").length).toBeGreaterThan(0);
  });
});
