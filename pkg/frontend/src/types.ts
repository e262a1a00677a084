/** JSON payload shapes of the backing HTTP API.
 *
 * Every field here mirrors the server's encoding verbatim: watts carry at
 * most 3 fractional digits (missing readings are null), probabilities and
 * scores at most 6. Nothing in the UI recomputes these values.
 */

export interface DatasetInfo {
  dataset_id: string;
  sample_period: number;
  houses: number;
}

export interface DatasetList {
  datasets: DatasetInfo[];
}

export interface HouseInfo {
  house_id: string;
  role: string;
  total_length: number;
  appliances: string[];
}

export interface HouseList {
  dataset_id: string;
  houses: HouseInfo[];
}

export interface WindowPayload {
  dataset_id: string;
  house_id: string;
  offset: number;
  length: number;
  total_length: number;
  sample_period: number;
  timestamps: number[];
  aggregate: (number | null)[];
  appliances: Record<string, (number | null)[]>;
  has_prev: boolean;
  has_next: boolean;
}

export interface AppliancePrediction {
  prob_ensemble: number;
  per_model_probs: number[];
  detected: boolean;
  y_hat: number[];
  cam_avg: number[];
  scores: number[];
}

export interface PredictPayload {
  dataset_id: string;
  house_id: string;
  offset: number;
  length: number;
  predictions: Record<string, AppliancePrediction>;
}

export interface BenchmarkRow {
  schema_version: number;
  dataset_id: string;
  appliance: string;
  method_id: string;
  task: "detection" | "localization";
  metrics: Record<string, number>;
  labels_used: number;
  windows_evaluated: number;
  created_at: number;
}

export interface BenchmarkPayload {
  dataset_id: string;
  rows: BenchmarkRow[];
}

export interface SignaturesPayload {
  signatures: Record<string, number[]>;
}

export interface ErrorEnvelope {
  error: {
    code: string;
    message: string;
  };
}
