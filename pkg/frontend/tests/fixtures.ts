/** Shared payload fixtures; values mirror the service's wire format. */

import type {
  ImportanceEntry,
  InferenceRow,
  ModelKind,
  PredictionResponse,
  WhatIfResponse,
} from "../src/types.js";
import { MODEL_KINDS } from "../src/types.js";

export function makePrediction(
  probabilities: Partial<Record<ModelKind, number>>,
  threshold = 0.5,
  likelyOverrides: Partial<Record<ModelKind, boolean>> = {},
): PredictionResponse {
  const predictions = {} as PredictionResponse["predictions"];
  for (const kind of MODEL_KINDS) {
    const p = probabilities[kind] ?? 0.5;
    predictions[kind] = {
      probability: p,
      transplant_likely: likelyOverrides[kind] ?? p >= threshold,
      digest: `digest-${kind}`,
    };
  }
  return {
    threshold,
    primary_model: "gradient_boosting",
    predictions,
    features_used: { age: 0.5 },
  };
}

export function makeSweep(values: number[], base = 0.2): WhatIfResponse {
  return {
    feature: "per_kdpi",
    lo: values[0],
    hi: values[values.length - 1],
    points: values.map((v, i) => ({
      value: v,
      probabilities: {
        gradient_boosting: base + 0.037 * i,
        random_forest: base + 0.021 * i,
        naive_bayes: base + 0.013 * i,
        logistic_regression: base + 0.008 * i,
      },
    })),
  };
}

/** Published-table style rows: age significant, hypertension not. */
export const INFERENCE_FIXTURE: InferenceRow[] = [
  {
    feature: "age", coefficient: 0.027, std_error: 0.00918,
    p_value: 0.0040, ci_low: 0.009, ci_high: 0.045,
    odds_ratio: 1.0271, important: true,
  },
  {
    feature: "per_gs", coefficient: -0.073, std_error: 0.0148,
    p_value: 0.0000, ci_low: -0.102, ci_high: -0.044,
    odds_ratio: 0.9297, important: true,
  },
  {
    feature: "hist_htn", coefficient: -0.006, std_error: 0.2128,
    p_value: 0.9770, ci_low: -0.423, ci_high: 0.411,
    odds_ratio: 0.9937, important: false,
  },
];

export const IMPORTANCE_FIXTURE: ImportanceEntry[] = [
  { feature: "per_kdpi", importance: 0.181, rank: 1 },
  { feature: "per_gs", importance: 0.134, rank: 2 },
  { feature: "age", importance: 0.0184, rank: 3 },
  { feature: "cit_arrival", importance: 0.0147, rank: 4 },
  { feature: "gender", importance: 0.0008, rank: 5 },
  { feature: "hist_diabetes", importance: 0.0004, rank: 6 },
  { feature: "hist_htn", importance: -0.0011, rank: 7 },
];
