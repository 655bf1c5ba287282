// Pure what-if state logic: form validation, ranking, delta arithmetic.
// Everything here is DOM-free so it can be unit tested directly.

import type { CounterfactualPayload, PredictionResponse } from "./types";

/** Hard validity bounds per feature (the service rejects these too). */
export const VALIDATION_BOUNDS: Record<string, [number, number]> = {
  nitrogen: [0, Infinity],
  phosphorus: [0, Infinity],
  potassium: [0, Infinity],
  temperature: [-Infinity, Infinity],
  humidity: [0, 100],
  ph: [0, 14],
  rainfall: [0, Infinity],
};

export interface FieldCheck {
  value: number | null;
  problem: string | null;
}

/** Parse one raw field; a problem string means the submit stays disabled. */
export function checkField(name: string, raw: string): FieldCheck {
  const trimmed = raw.trim();
  if (trimmed === "") return { value: null, problem: "required" };
  const value = Number(trimmed);
  if (!Number.isFinite(value)) return { value: null, problem: "not a number" };
  const [lo, hi] = VALIDATION_BOUNDS[name] ?? [-Infinity, Infinity];
  if (value < lo || value > hi) {
    const range =
      hi === Infinity ? `>= ${lo}` : `${lo} to ${hi}`;
    return { value: null, problem: `must be ${range}` };
  }
  return { value, problem: null };
}

export interface ReadingCheck {
  values: number[] | null;
  problems: (string | null)[];
}

export function checkReading(names: string[], raw: string[]): ReadingCheck {
  const checks = names.map((name, i) => checkField(name, raw[i] ?? ""));
  const problems = checks.map((c) => c.problem);
  const valid = checks.every((c) => c.problem === null);
  return { values: valid ? checks.map((c) => c.value as number) : null, problems };
}

export interface RankedCrop {
  crop: string;
  probability: number;
}

/** Crops ranked by probability, ties broken by class order (server order). */
export function rankCrops(prediction: PredictionResponse, topK = 3): RankedCrop[] {
  return prediction.classes
    .map((crop, i) => ({ crop, probability: prediction.probabilities[i] }))
    .sort((a, b) => b.probability - a.probability)
    .slice(0, topK);
}

export interface DeltaRow {
  feature: string;
  delta: number;
}

/**
 * Per-feature changes of a counterfactual against the CURRENT query (which
 * may have been edited since the search ran); zero deltas are omitted.
 */
export function deltasAgainstQuery(
  featureNames: string[],
  query: number[],
  cf: CounterfactualPayload,
): DeltaRow[] {
  return featureNames
    .map((feature, i) => ({ feature, delta: cf.features[i] - query[i] }))
    .filter((row) => row.delta !== 0);
}

/** Methods that only make sense for tree-based models. */
export const TREE_ONLY_METHODS = new Set(["gain", "path"]);
export const TREE_KINDS = new Set(["dt", "rf", "lgbm"]);

export function methodAvailable(method: string, modelKind: string): boolean {
  return !TREE_ONLY_METHODS.has(method) || TREE_KINDS.has(modelKind);
}

/** Session seed: drawn once, displayed, reused for every stochastic call. */
export function drawSessionSeed(): number {
  return Math.floor(Math.random() * 1_000_000);
}
