/**
 * Interaction flows: each user gesture maps to its documented protocol
 * message and nothing else. Mutating calls are serialized; while one is in
 * flight the store's busy flag disables further mutating controls.
 */

import { ApiClient, ApiError } from './api.js';
import { Store } from './state.js';
import type { EditOpSpec, ScopeSpec } from './types.js';

export class Controller {
  constructor(
    readonly api: ApiClient,
    readonly store: Store,
  ) {}

  /** Initial load: model summary, history, and the most important feature. */
  async boot(): Promise<void> {
    const model = await this.api.loadModel();
    const history = await this.api.getHistory();
    this.store.update({
      model,
      features: model.features,
      history,
      canUndo: model.can_undo,
      canRedo: model.can_redo,
    });
    const metrics = await this.api.getMetrics(this.store.get().scope);
    this.store.update({ metrics });
    if (model.features.length > 0) {
      await this.openFeature(model.features[0].name);
    }
  }

  async openFeature(name: string): Promise<void> {
    const payload = await this.api.getFeature(name);
    this.store.update({
      currentFeature: name,
      featurePayload: payload,
      interactionPayload: null,
      selection: null,
      correlation: null,
      selectionMetrics: null,
    });
  }

  async openInteraction(a: string, b: string): Promise<void> {
    const payload = await this.api.getInteraction(a, b);
    this.store.update({
      currentFeature: `${a} x ${b}`,
      featurePayload: null,
      interactionPayload: payload,
      selection: null,
      correlation: null,
      selectionMetrics: null,
    });
  }

  /**
   * Selection change from the canvas. An empty selection clears the toolbar
   * state; a non-empty one fetches the selected-scope metrics and the
   * correlation ranking, exactly one message each.
   */
  async select(bins: number[]): Promise<void> {
    const term = this.store.get().currentFeature;
    if (!term || this.store.get().featurePayload === null) return;
    if (bins.length === 0) {
      this.store.update({ selection: null, correlation: null, selectionMetrics: null });
      return;
    }
    this.store.update({ selection: { term, bins } });
    try {
      const selectionMetrics = await this.api.getMetrics({ kind: 'selected', term, bins });
      const correlation = await this.api.getCorrelation(term, bins);
      this.store.update({ selectionMetrics, correlation, banner: null });
    } catch (error) {
      this.fail(error);
    }
  }

  /** Toolbar click: stage the edit via PreviewEdit. */
  async applyTool(op: Omit<EditOpSpec, 'term' | 'bins'>): Promise<void> {
    const { selection, busy, staged } = this.store.get();
    if (!selection || busy || staged) return;
    this.store.update({ busy: true });
    try {
      const preview = await this.api.previewEdit({
        ...op,
        term: selection.term,
        bins: selection.bins,
      });
      this.store.update({ staged: preview, banner: null });
      await this.refreshMetrics();
    } catch (error) {
      this.fail(error);
    } finally {
      this.store.update({ busy: false });
    }
  }

  /** Check/cross on the status bar: ResolvePreview accept or discard. */
  async resolve(accept: boolean): Promise<void> {
    const { staged, busy } = this.store.get();
    if (!staged || busy) return;
    this.store.update({ busy: true });
    try {
      await this.api.resolvePreview(accept);
      this.store.update({ staged: null });
      await this.refreshAfterMutation();
    } catch (error) {
      this.fail(error);
    } finally {
      this.store.update({ busy: false });
    }
  }

  async undo(): Promise<void> {
    await this.headMutation(() => this.api.undo());
  }

  async redo(): Promise<void> {
    await this.headMutation(() => this.api.redo());
  }

  async checkout(id: string): Promise<void> {
    await this.headMutation(() => this.api.checkout(id));
  }

  async confirm(id: string, confirmed: boolean): Promise<void> {
    if (this.store.get().busy) return;
    this.store.update({ busy: true });
    try {
      await this.api.confirmCommit(id, confirmed);
      const history = await this.api.getHistory();
      this.store.update({ history, banner: null });
    } catch (error) {
      this.fail(error);
    } finally {
      this.store.update({ busy: false });
    }
  }

  async setMessage(id: string, message: string): Promise<void> {
    if (this.store.get().busy) return;
    this.store.update({ busy: true });
    try {
      await this.api.setMessage(id, message);
      const history = await this.api.getHistory();
      this.store.update({ history, banner: null });
    } catch (error) {
      this.fail(error);
    } finally {
      this.store.update({ busy: false });
    }
  }

  async save(): Promise<string | null> {
    if (this.store.get().busy) return null;
    this.store.update({ busy: true });
    try {
      const saved = await this.api.saveModel();
      this.store.update({ banner: null });
      return saved.file;
    } catch (error) {
      if (error instanceof ApiError && error.type === 'SaveBlocked') {
        const ids = (error.details.unconfirmed as string[] | undefined) ?? [];
        this.store.update({ banner: `confirm all edits before saving: ${ids.join(', ')}` });
      } else {
        this.fail(error);
      }
      return null;
    } finally {
      this.store.update({ busy: false });
    }
  }

  /** Scope switcher in the metric panel. */
  async setScope(scope: ScopeSpec): Promise<void> {
    this.store.update({ scope });
    try {
      const metrics = await this.api.getMetrics(scope);
      this.store.update({ metrics, banner: null });
    } catch (error) {
      this.fail(error);
    }
  }

  setMode(mode: 'move' | 'select'): void {
    this.store.update({ mode });
  }

  private async headMutation(call: () => Promise<unknown>): Promise<void> {
    if (this.store.get().busy || this.store.get().staged) return;
    this.store.update({ busy: true });
    try {
      await call();
      await this.refreshAfterMutation();
    } catch (error) {
      this.fail(error);
    } finally {
      this.store.update({ busy: false });
    }
  }

  /** Re-derive everything the mutation may have changed from the server. */
  private async refreshAfterMutation(): Promise<void> {
    const history = await this.api.getHistory();
    const state = this.store.get();
    this.store.update({
      history,
      canUndo: history.head !== 'ROOT',
      canRedo: history.commits.some((c) => !c.applied),
      banner: null,
    });
    if (state.currentFeature && state.featurePayload) {
      const featurePayload = await this.api.getFeature(state.currentFeature);
      this.store.update({ featurePayload });
    }
    await this.refreshMetrics();
  }

  private async refreshMetrics(): Promise<void> {
    const { scope, selection } = this.store.get();
    const metrics = await this.api.getMetrics(scope);
    this.store.update({ metrics });
    if (selection) {
      const selectionMetrics = await this.api.getMetrics({
        kind: 'selected',
        term: selection.term,
        bins: selection.bins,
      });
      this.store.update({ selectionMetrics });
    }
  }

  /** Protocol failures surface as a banner and clear staged UI state. */
  private fail(error: unknown): void {
    const message =
      error instanceof ApiError
        ? `${error.type}: ${error.message}`
        : error instanceof Error
          ? error.message
          : String(error);
    this.store.update({ banner: message, staged: null });
  }
}
