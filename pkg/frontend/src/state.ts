/**
 * Single store for panel and canvas state. Panels re-render from here, and
 * everything numeric in the store is a verbatim protocol response: the
 * client performs no model math of its own.
 */

import type {
  CorrelationPayload,
  FeaturePayload,
  FeatureSummary,
  HistoryPayload,
  InteractionPayload,
  LoadModelPayload,
  MetricsTriple,
  PreviewPayload,
  ScopeSpec,
} from './types.js';

export type CanvasMode = 'move' | 'select';

export interface SelectionState {
  term: string;
  bins: number[];
}

export interface AppState {
  model: LoadModelPayload | null;
  features: FeatureSummary[];
  currentFeature: string | null;
  featurePayload: FeaturePayload | null;
  interactionPayload: InteractionPayload | null;
  mode: CanvasMode;
  selection: SelectionState | null;
  staged: PreviewPayload | null;
  scope: ScopeSpec;
  metrics: MetricsTriple | null;
  selectionMetrics: MetricsTriple | null;
  correlation: CorrelationPayload | null;
  history: HistoryPayload | null;
  canUndo: boolean;
  canRedo: boolean;
  busy: boolean;
  banner: string | null;
}

export function initialState(): AppState {
  return {
    model: null,
    features: [],
    currentFeature: null,
    featurePayload: null,
    interactionPayload: null,
    mode: 'select',
    selection: null,
    staged: null,
    scope: { kind: 'global' },
    metrics: null,
    selectionMetrics: null,
    correlation: null,
    history: null,
    canUndo: false,
    canRedo: false,
    busy: false,
    banner: null,
  };
}

export type Listener = (state: AppState) => void;

export class Store {
  private state: AppState = initialState();
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  update(partial: Partial<AppState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}
