/**
 * Typed client for the session protocol. One method per catalog message;
 * the transport is injected so tests can record and stub the traffic.
 */

import type {
  CommitPayload,
  CorrelationPayload,
  EditOpSpec,
  Envelope,
  FeaturePayload,
  HeadPayload,
  HistoryPayload,
  InteractionPayload,
  LoadModelPayload,
  MetricsTriple,
  PreviewPayload,
  SavePayload,
  ScopeSpec,
  FeatureSummary,
} from './types.js';

export type Transport = (message: Record<string, unknown>) => Promise<Envelope>;

export class ApiError extends Error {
  readonly type: string;
  readonly details: Record<string, unknown>;

  constructor(type: string, message: string, details: Record<string, unknown> = {}) {
    super(message);
    this.type = type;
    this.details = details;
  }
}

/** Default transport: POST the message to /api on the serving origin. */
export function httpTransport(baseUrl = ''): Transport {
  return async (message) => {
    const response = await fetch(`${baseUrl}/api`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(message),
    });
    return (await response.json()) as Envelope;
  };
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  private async call<T>(message: Record<string, unknown>): Promise<T> {
    const envelope = await this.transport(message);
    if (!envelope.ok) {
      const error = envelope.error ?? { type: 'Unknown', message: 'request failed' };
      const { type, message: text, ...details } = error;
      throw new ApiError(type, text, details);
    }
    return envelope.data as T;
  }

  loadModel(): Promise<LoadModelPayload> {
    return this.call({ type: 'LoadModel' });
  }

  listFeatures(): Promise<{ features: FeatureSummary[] }> {
    return this.call({ type: 'ListFeatures' });
  }

  getFeature(name: string): Promise<FeaturePayload> {
    return this.call({ type: 'GetFeature', name });
  }

  getInteraction(a: string, b: string): Promise<InteractionPayload> {
    return this.call({ type: 'GetFeature', interaction: [a, b] });
  }

  previewEdit(op: EditOpSpec): Promise<PreviewPayload> {
    return this.call({ type: 'PreviewEdit', op });
  }

  resolvePreview(accept: boolean): Promise<{ commit?: CommitPayload }> {
    return this.call({ type: 'ResolvePreview', accept });
  }

  undo(): Promise<HeadPayload> {
    return this.call({ type: 'Undo' });
  }

  redo(): Promise<HeadPayload> {
    return this.call({ type: 'Redo' });
  }

  checkout(id: string): Promise<HeadPayload> {
    return this.call({ type: 'Checkout', id });
  }

  confirmCommit(id: string, confirmed = true): Promise<{ commit: CommitPayload }> {
    return this.call({ type: 'ConfirmCommit', id, confirmed });
  }

  setMessage(id: string, message: string): Promise<{ commit: CommitPayload }> {
    return this.call({ type: 'SetMessage', id, message });
  }

  getMetrics(scope: ScopeSpec): Promise<MetricsTriple> {
    return this.call({ type: 'GetMetrics', scope });
  }

  getCorrelation(term: string, bins: number[]): Promise<CorrelationPayload> {
    return this.call({ type: 'GetCorrelation', term, bins });
  }

  getHistory(): Promise<HistoryPayload> {
    return this.call({ type: 'GetHistory' });
  }

  saveModel(): Promise<SavePayload> {
    return this.call({ type: 'SaveModel' });
  }
}
