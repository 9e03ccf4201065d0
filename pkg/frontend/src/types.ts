/** Payload shapes of the prediction service API. */

export const MODEL_KINDS = [
  "gradient_boosting",
  "random_forest",
  "naive_bayes",
  "logistic_regression",
] as const;

export type ModelKind = (typeof MODEL_KINDS)[number];

export const MODEL_LABELS: Record<ModelKind, string> = {
  gradient_boosting: "Gradient Boosting",
  random_forest: "Random Forest",
  naive_bayes: "Naive Bayes",
  logistic_regression: "Logistic Regression",
};

export interface ModelPrediction {
  probability: number;
  transplant_likely: boolean;
  digest: string;
}

export interface PredictionResponse {
  threshold: number;
  primary_model: ModelKind;
  predictions: Record<ModelKind, ModelPrediction>;
  features_used: Record<string, number>;
}

export interface WhatIfPoint {
  value: number;
  probabilities: Record<ModelKind, number>;
}

export interface WhatIfResponse {
  feature: string;
  lo: number;
  hi: number;
  points: WhatIfPoint[];
}

export interface WhatIfRequest {
  record: Record<string, number>;
  feature: string;
  lo: number;
  hi: number;
  steps: number;
}

export interface ImportanceEntry {
  feature: string;
  importance: number;
  rank: number;
}

export interface InferenceRow {
  feature: string;
  coefficient: number;
  std_error: number;
  p_value: number;
  ci_low: number;
  ci_high: number;
  odds_ratio: number;
  important: boolean;
}
