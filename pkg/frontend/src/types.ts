/**
 * Payload types for the editing-session protocol (POST /api).
 * These mirror the server's message catalog; the client never computes
 * model numbers itself, it only displays what arrives in these shapes.
 */

export interface Envelope {
  ok: boolean;
  data?: unknown;
  error?: { type: string; message: string; [key: string]: unknown };
}

export interface FeatureSummary {
  name: string;
  kind: 'continuous' | 'categorical';
  n_bins: number;
  importance: number;
}

export interface LoadModelPayload {
  link: 'logit' | 'identity';
  intercept: number;
  feature_count: number;
  n_samples: number;
  threshold: number;
  features: FeatureSummary[];
  interactions: { feature_a: string; feature_b: string }[];
  head: string;
  can_undo: boolean;
  can_redo: boolean;
}

export interface FeaturePayload {
  name: string;
  kind: 'continuous' | 'categorical';
  editable: true;
  bin_edges?: number[];
  bin_labels?: string[];
  scores: number[];
  original_scores: number[];
  previous_scores: number[];
  counts: number[];
  score_stddev: number[] | null;
}

export interface InteractionPayload {
  feature_a: string;
  feature_b: string;
  scores: number[][];
  editable: false;
}

export interface DiffPayload {
  term: string;
  bins: number[];
  old: number[];
  new: number[];
}

export interface PreviewPayload {
  diff: DiffPayload;
  noop: boolean;
}

export interface CommitPayload {
  id: string;
  parent: string;
  timestamp: number;
  message: string;
  confirmed: boolean;
  diff: DiffPayload;
  applied?: boolean;
}

export interface HeadPayload {
  head: string;
  can_undo: boolean;
  can_redo: boolean;
}

export interface HistoryPayload {
  head: string;
  commits: CommitPayload[];
}

export interface ConfusionPayload {
  tp: number;
  fp: number;
  tn: number;
  fn: number;
}

export interface MetricReportPayload {
  scope: Record<string, unknown>;
  sample_count: number;
  classification?: {
    confusion: ConfusionPayload;
    accuracy: number | null;
    balanced_accuracy: number | null;
    auc: number | null;
  };
  regression?: {
    rmse: number | null;
    mae: number | null;
    mape: number | null;
    mape_excluded: number;
  };
}

export interface MetricsTriple {
  original: MetricReportPayload;
  previous: MetricReportPayload;
  current: MetricReportPayload;
}

export interface RankedFeaturePayload {
  name: string;
  distance: number;
  full: number[];
  selected: number[];
  selected_empty: boolean;
  bin_edges?: number[];
  bin_labels?: string[];
}

export interface CorrelationPayload {
  continuous: RankedFeaturePayload[];
  categorical: RankedFeaturePayload[];
}

export interface SavePayload {
  file: string;
  path: string | null;
}

export type ScopeSpec =
  | { kind: 'global' }
  | { kind: 'selected'; term: string; bins: number[] }
  | { kind: 'slice'; term: string; label: string };

export type ToolName = 'move' | 'interpolate' | 'monotonize' | 'align' | 'delete';

export interface EditOpSpec {
  tool: ToolName;
  term: string;
  bins: number[];
  delta?: number;
  mode?: 'linear' | 'equal_bins' | 'regression';
  segments?: number;
  direction?: 'increasing' | 'decreasing';
  anchor?: 'left' | 'right' | 'weighted_mean';
}
