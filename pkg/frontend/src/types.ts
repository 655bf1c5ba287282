// Wire types for the /v1 endpoints. Every number the UI draws comes from
// one of these payloads or from the user's own form entries.

export interface FeatureSchema {
  names: string[];
  units: string[];
  label_name: string;
}

export interface ModelInfo {
  kind: string;
  classes: string[];
  schema: FeatureSchema;
  seed: number;
  artifact_hash: string;
  importance: AttributionPayload;
  feature_ranges: Record<string, [number, number]>;
}

export interface PredictionResponse {
  predicted_crop: string;
  probabilities: number[];
  classes: string[];
  model_kind: string;
  artifact_hash: string;
}

export interface AttributionPayload {
  method: string;
  target_class: string | null;
  baseline: number | null;
  feature_names: string[];
  contributions: number[];
  metadata: Record<string, unknown>;
  seed?: number;
}

export interface LimeRulePayload {
  feature_index: number;
  feature_name: string;
  condition: string;
  weight: number;
}

export interface LimePayload {
  target_class: string;
  rules: LimeRulePayload[];
  intercept: number;
  fidelity: number | null;
  metadata: Record<string, unknown>;
  seed?: number;
}

export interface CounterfactualPayload {
  features: number[];
  predicted_class: string;
  deltas: number[];
  distance: number;
  n_changed: number;
}

export interface CounterfactualResponse {
  query: number[];
  target_class: string;
  status: "ok" | "not_found";
  counterfactuals: CounterfactualPayload[];
  seed: number;
}

export type ExplainMethod =
  | "permutation"
  | "gain"
  | "path"
  | "shap-exact"
  | "shap-kernel"
  | "lime";

export type ExplainResponse = AttributionPayload | LimePayload;

export function isLimePayload(r: ExplainResponse): r is LimePayload {
  return "rules" in r;
}
