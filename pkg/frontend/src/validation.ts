/** Donor-field definitions and client-side validation.
 *
 * Bounds mirror the service's record schema; slider ranges are the same
 * bounds with a finite display cap for the open-ended fields.  A blank
 * field is valid: the service imputes it from the model's training fills.
 */

export type FieldKind = "continuous" | "binary";

export interface FieldSpec {
  name: string;
  label: string;
  kind: FieldKind;
  min: number;
  /** Validation maximum; null = unbounded above. */
  max: number | null;
  /** Upper end of the slider for open-ended fields. */
  sliderMax: number;
  step: number;
  unit: string;
}

export const FIELD_SPECS: FieldSpec[] = [
  { name: "age", label: "Donor age", kind: "continuous", min: 0, max: null, sliderMax: 100, step: 1, unit: "years" },
  { name: "gender", label: "Gender", kind: "binary", min: 0, max: 1, sliderMax: 1, step: 1, unit: "" },
  { name: "per_gs", label: "Glomerulosclerosis", kind: "continuous", min: 0, max: 100, sliderMax: 100, step: 0.5, unit: "%" },
  { name: "per_kdpi", label: "KDPI", kind: "continuous", min: 0, max: 1, sliderMax: 1, step: 0.01, unit: "fraction" },
  { name: "cit_arrival", label: "Cold ischemia at arrival", kind: "continuous", min: 0, max: null, sliderMax: 72, step: 0.5, unit: "hours" },
  { name: "hist_diabetes", label: "History of diabetes", kind: "binary", min: 0, max: 1, sliderMax: 1, step: 1, unit: "" },
  { name: "hist_htn", label: "History of hypertension", kind: "binary", min: 0, max: 1, sliderMax: 1, step: 1, unit: "" },
];

export const SWEEPABLE_FIELDS = FIELD_SPECS.filter((f) => f.kind === "continuous");

export function fieldSpec(name: string): FieldSpec {
  const spec = FIELD_SPECS.find((f) => f.name === name);
  if (!spec) throw new Error(`unknown field ${name}`);
  return spec;
}

export interface FieldState {
  raw: string;
  /** Parsed value; null when the field is blank (to be imputed). */
  value: number | null;
  valid: boolean;
  message: string;
}

export function validateField(spec: FieldSpec, raw: string): FieldState {
  const trimmed = raw.trim();
  if (trimmed === "") {
    return { raw, value: null, valid: true, message: "" };
  }
  const value = Number(trimmed);
  if (!Number.isFinite(value)) {
    return { raw, value: null, valid: false, message: "not a number" };
  }
  if (spec.kind === "binary") {
    if (value !== 0 && value !== 1) {
      return { raw, value: null, valid: false, message: "must be 0 or 1" };
    }
    return { raw, value, valid: true, message: "" };
  }
  if (value < spec.min) {
    return { raw, value: null, valid: false, message: `minimum is ${spec.min}` };
  }
  if (spec.max !== null && value > spec.max) {
    return { raw, value: null, valid: false, message: `maximum is ${spec.max}` };
  }
  return { raw, value, valid: true, message: "" };
}

export function formIsValid(states: Iterable<FieldState>): boolean {
  for (const state of states) {
    if (!state.valid) return false;
  }
  return true;
}

/** Record payload from the valid, non-blank fields. */
export function buildRecord(states: Map<string, FieldState>): Record<string, number> {
  const record: Record<string, number> = {};
  for (const [name, state] of states) {
    if (state.valid && state.value !== null) record[name] = state.value;
  }
  return record;
}

export interface SweepCheck {
  ok: boolean;
  message: string;
}

export function validateSweep(
  featureName: string,
  lo: number,
  hi: number,
  steps: number,
): SweepCheck {
  const spec = FIELD_SPECS.find((f) => f.name === featureName);
  if (!spec || spec.kind !== "continuous") {
    return { ok: false, message: "pick a continuous feature to sweep" };
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    return { ok: false, message: "sweep bounds must be numbers" };
  }
  if (!Number.isInteger(steps) || steps < 2) {
    return { ok: false, message: "steps must be an integer of at least 2" };
  }
  if (lo > hi) {
    return { ok: false, message: "low bound exceeds high bound" };
  }
  if (lo < spec.min) {
    return { ok: false, message: `low bound under the ${spec.label} minimum ${spec.min}` };
  }
  if (spec.max !== null && hi > spec.max) {
    return { ok: false, message: `high bound over the ${spec.label} maximum ${spec.max}` };
  }
  return { ok: true, message: "" };
}
