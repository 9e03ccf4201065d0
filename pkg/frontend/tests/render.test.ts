import { describe, expect, it } from "vitest";

import {
  renderErrorBanner,
  renderImportance,
  renderInference,
  renderPredictionView,
  renderWhatIfChart,
} from "../src/render.js";
import { MODEL_KINDS } from "../src/types.js";
import { IMPORTANCE_FIXTURE, INFERENCE_FIXTURE, makePrediction, makeSweep } from "./fixtures.js";

function container(): HTMLElement {
  const node = document.createElement("div");
  document.body.appendChild(node);
  return node;
}

describe("renderPredictionView", () => {
  it("shows the headline probability to two decimals with a positive badge", () => {
    const view = container();
    renderPredictionView(view, makePrediction({ gradient_boosting: 0.774 }), "gradient_boosting");
    const card = view.querySelector('[data-model="gradient_boosting"]')!;
    expect(card.querySelector(".gauge-value")!.textContent).toBe("0.77");
    const badge = card.querySelector(".decision-badge")!;
    expect(badge.textContent).toBe("TRANSPLANT-LIKELY");
    expect(badge.classList.contains("positive")).toBe(true);
  });

  it("probability exactly at the threshold keeps the positive badge", () => {
    const view = container();
    renderPredictionView(view, makePrediction({ random_forest: 0.5 }), "random_forest");
    const badge = view.querySelector('[data-model="random_forest"] .decision-badge')!;
    expect(badge.textContent).toBe("TRANSPLANT-LIKELY");
  });

  it("renders a negative badge below threshold", () => {
    const view = container();
    renderPredictionView(view, makePrediction({ naive_bayes: 0.21 }), "naive_bayes");
    const badge = view.querySelector('[data-model="naive_bayes"] .decision-badge')!;
    expect(badge.textContent).toBe("DISCARD-LIKELY");
    expect(badge.classList.contains("negative")).toBe(true);
  });

  it("keeps full payload precision in data attributes", () => {
    const probabilities = {
      gradient_boosting: 0.7774509196959375,
      random_forest: 0.123456789012345678,
      naive_bayes: 1 / 3,
      logistic_regression: 0.9999999999999999,
    };
    const view = container();
    renderPredictionView(view, makePrediction(probabilities), "gradient_boosting");
    for (const kind of MODEL_KINDS) {
      const value = view.querySelector<HTMLElement>(`[data-model="${kind}"] .gauge-value`)!;
      expect(Number(value.dataset.probability)).toBe(probabilities[kind]);
      expect(value.textContent).toBe(probabilities[kind].toFixed(2));
    }
  });

  it("marks the primary model and the selected tab's card", () => {
    const view = container();
    renderPredictionView(view, makePrediction({}), "naive_bayes");
    expect(view.querySelector('[data-model="gradient_boosting"]')!.classList.contains("primary")).toBe(true);
    expect(view.querySelector('[data-model="naive_bayes"]')!.classList.contains("selected")).toBe(true);
  });

  it("clears every gauge when the response is null", () => {
    const view = container();
    renderPredictionView(view, makePrediction({}), "gradient_boosting");
    expect(view.querySelectorAll(".gauge-value").length).toBe(4);
    renderPredictionView(view, null, "gradient_boosting");
    expect(view.querySelectorAll(".gauge-value").length).toBe(0);
  });
});

describe("renderErrorBanner", () => {
  it("shows and clears the banner", () => {
    const slot = container();
    renderErrorBanner(slot, "service unavailable");
    expect(slot.querySelector(".error-banner")!.textContent).toBe("service unavailable");
    renderErrorBanner(slot, null);
    expect(slot.querySelector(".error-banner")).toBeNull();
  });
});

describe("renderWhatIfChart", () => {
  it("plots one point per sweep entry per series", () => {
    const chart = container();
    const values = Array.from({ length: 11 }, (_, i) => i / 10);
    renderWhatIfChart(chart, makeSweep(values), "gradient_boosting");
    for (const kind of MODEL_KINDS) {
      const dots = chart.querySelectorAll(`[data-model="${kind}"] .series-point`);
      expect(dots.length).toBe(11);
    }
  });

  it("spans exactly the requested range", () => {
    const chart = container();
    renderWhatIfChart(chart, makeSweep([2, 21, 40]), "gradient_boosting");
    const svg = chart.querySelector("svg")!;
    expect(Number(svg.getAttribute("data-lo"))).toBe(2);
    expect(Number(svg.getAttribute("data-hi"))).toBe(40);
    const dots = chart.querySelectorAll('[data-model="gradient_boosting"] .series-point');
    expect(Number(dots[0].getAttribute("data-value"))).toBe(2);
    expect(Number(dots[dots.length - 1].getAttribute("data-value"))).toBe(40);
    const first = Number(dots[0].getAttribute("cx"));
    const last = Number(dots[dots.length - 1].getAttribute("cx"));
    expect(first).toBeLessThan(last);
  });

  it("renders a flat line for a degenerate lo = hi sweep", () => {
    const chart = container();
    const sweep = makeSweep([0.3, 0.3]);
    sweep.points[1].probabilities = { ...sweep.points[0].probabilities };
    renderWhatIfChart(chart, sweep, "gradient_boosting");
    const dots = chart.querySelectorAll('[data-model="gradient_boosting"] .series-point');
    expect(dots.length).toBe(2);
    expect(dots[0].getAttribute("cx")).toBe(dots[1].getAttribute("cx"));
    expect(dots[0].getAttribute("cy")).toBe(dots[1].getAttribute("cy"));
  });

  it("chart point values equal the payload within 1e-9", () => {
    const chart = container();
    const sweep = makeSweep([0, 0.25, 0.5, 0.75, 1], 0.0123456789012345);
    renderWhatIfChart(chart, sweep, "random_forest");
    for (const kind of MODEL_KINDS) {
      const dots = chart.querySelectorAll(`[data-model="${kind}"] .series-point`);
      dots.forEach((dot, i) => {
        const payload = sweep.points[i].probabilities[kind];
        expect(Math.abs(Number(dot.getAttribute("data-probability")) - payload)).toBeLessThan(1e-9);
        expect(Math.abs(Number(dot.getAttribute("data-value")) - sweep.points[i].value)).toBeLessThan(1e-9);
      });
    }
  });

  it("clears on null", () => {
    const chart = container();
    renderWhatIfChart(chart, makeSweep([0, 1]), "gradient_boosting");
    renderWhatIfChart(chart, null, "gradient_boosting");
    expect(chart.querySelector("svg")).toBeNull();
  });
});

describe("renderImportance", () => {
  it("renders seven bars in descending order", () => {
    const panel = container();
    renderImportance(panel, IMPORTANCE_FIXTURE);
    const rows = panel.querySelectorAll(".importance-row");
    expect(rows.length).toBe(7);
    const importances = Array.from(panel.querySelectorAll<HTMLElement>(".importance-bar")).map(
      (bar) => Number(bar.dataset.importance),
    );
    for (let i = 1; i < importances.length; i++) {
      expect(importances[i]).toBeLessThanOrEqual(importances[i - 1]);
    }
    expect(rows[0].getAttribute("data-feature")).toBe("per_kdpi");
  });

  it("sorts by rank even when entries arrive shuffled", () => {
    const panel = container();
    renderImportance(panel, [...IMPORTANCE_FIXTURE].reverse());
    expect(panel.querySelector(".importance-row")!.getAttribute("data-feature")).toBe("per_kdpi");
  });

  it("negative importance renders an empty bar, not a negative width", () => {
    const panel = container();
    renderImportance(panel, IMPORTANCE_FIXTURE);
    const bars = panel.querySelectorAll<HTMLElement>(".importance-bar");
    expect(parseFloat(bars[6].style.width)).toBe(0);
  });

  it("falls back to a placeholder panel", () => {
    const panel = container();
    renderImportance(panel, null);
    expect(panel.querySelector(".placeholder-panel")).not.toBeNull();
  });
});

describe("renderInference", () => {
  it("uses the published table headers", () => {
    const panel = container();
    renderInference(panel, INFERENCE_FIXTURE);
    const headers = Array.from(panel.querySelectorAll("th")).map((th) => th.textContent);
    expect(headers).toEqual([
      "Features", "P value", "Confidence Interval at 95%", "Odds Ratio",
    ]);
  });

  it("marks p < 0.05 rows and leaves the rest unmarked", () => {
    const panel = container();
    renderInference(panel, INFERENCE_FIXTURE);
    const age = panel.querySelector('tr[data-feature="age"]')!;
    expect(age.classList.contains("significant")).toBe(true);
    expect(age.textContent).toContain("0.0040");
    const htn = panel.querySelector('tr[data-feature="hist_htn"]')!;
    expect(htn.classList.contains("significant")).toBe(false);
    expect(htn.textContent).toContain("0.9770");
  });

  it("formats inference values to four decimals", () => {
    const panel = container();
    renderInference(panel, INFERENCE_FIXTURE);
    const age = panel.querySelector('tr[data-feature="age"]')!;
    const cells = age.querySelectorAll("td");
    expect(cells[1].textContent).toBe("0.0040");
    expect(cells[2].textContent).toBe("(0.0090, 0.0450)");
    expect(cells[3].textContent).toBe("1.0271");
  });

  it("falls back to a placeholder panel", () => {
    const panel = container();
    renderInference(panel, null);
    expect(panel.querySelector(".placeholder-panel")).not.toBeNull();
  });
});
