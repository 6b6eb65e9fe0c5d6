/**
 * Metric panel: original / previous / current values for the active scope,
 * plus the confusion matrix for classifiers. Numbers are rendered exactly
 * as the server reported them.
 */

import { Controller } from '../controller.js';
import { metricRows } from '../format.js';
import type { AppState } from '../state.js';
import type { MetricsTriple } from '../types.js';

export class MetricPanel {
  private scopeSelect: HTMLSelectElement;
  private sliceControls: HTMLSpanElement;
  private body: HTMLDivElement;

  constructor(root: HTMLElement, private readonly controller: Controller) {
    root.innerHTML = `
      <h2>Metrics</h2>
      <div class="scope-row">
        <select class="scope"></select>
        <span class="slice-controls"></span>
      </div>
      <div class="metric-body"></div>`;
    this.scopeSelect = root.querySelector('.scope')!;
    this.sliceControls = root.querySelector('.slice-controls')!;
    this.body = root.querySelector('.metric-body')!;
    for (const [value, label] of [
      ['global', 'Global scope'],
      ['selected', 'Selected scope'],
      ['slice', 'Slice scope'],
    ]) {
      const option = document.createElement('option');
      option.value = value;
      option.textContent = label;
      this.scopeSelect.appendChild(option);
    }
    this.scopeSelect.addEventListener('change', () => this.onScopeChange());
  }

  private onScopeChange(): void {
    const kind = this.scopeSelect.value;
    const state = this.controller.store.get();
    if (kind === 'global') {
      void this.controller.setScope({ kind: 'global' });
    } else if (kind === 'selected' && state.selection) {
      void this.controller.setScope({
        kind: 'selected',
        term: state.selection.term,
        bins: state.selection.bins,
      });
    } else if (kind === 'slice') {
      const term = this.sliceControls.querySelector<HTMLSelectElement>('.slice-term')?.value;
      const label = this.sliceControls.querySelector<HTMLSelectElement>('.slice-label')?.value;
      if (term && label !== undefined) {
        void this.controller.setScope({ kind: 'slice', term, label });
      }
    }
  }

  render(state: AppState): void {
    this.scopeSelect.value = state.scope.kind;
    this.renderSliceControls(state);
    const triple =
      state.scope.kind === 'selected' && state.selectionMetrics
        ? state.selectionMetrics
        : state.metrics;
    if (!triple) {
      this.body.innerHTML = '<p class="hint">no dataset loaded</p>';
      return;
    }
    this.body.innerHTML = this.tableHtml(triple) + this.confusionHtml(triple);
  }

  private renderSliceControls(state: AppState): void {
    if (state.scope.kind !== 'slice' && this.scopeSelect.value !== 'slice') {
      this.sliceControls.innerHTML = '';
      return;
    }
    if (this.sliceControls.childElementCount > 0) return;
    const categorical = state.features.filter((f) => f.kind === 'categorical');
    const termSelect = document.createElement('select');
    termSelect.className = 'slice-term';
    for (const f of categorical) {
      const option = document.createElement('option');
      option.value = f.name;
      option.textContent = f.name;
      termSelect.appendChild(option);
    }
    const labelSelect = document.createElement('select');
    labelSelect.className = 'slice-label';
    const fillLabels = async () => {
      labelSelect.innerHTML = '';
      if (!termSelect.value) return;
      const payload = await this.controller.api.getFeature(termSelect.value);
      for (const label of payload.bin_labels ?? []) {
        const option = document.createElement('option');
        option.value = label;
        option.textContent = label === '' ? '(missing)' : label;
        labelSelect.appendChild(option);
      }
      this.onScopeChange();
    };
    termSelect.addEventListener('change', () => void fillLabels());
    labelSelect.addEventListener('change', () => this.onScopeChange());
    this.sliceControls.appendChild(termSelect);
    this.sliceControls.appendChild(labelSelect);
    void fillLabels();
  }

  private tableHtml(triple: MetricsTriple): string {
    const rows = metricRows(triple.original, triple.previous, triple.current);
    const bounded = Boolean(triple.current.classification); // unit-interval metrics
    const cell = (cls: string, value: string, raw: number | null) => {
      const bar =
        bounded && raw !== null
          ? `<div class="metric-bar ${cls}" style="width:${Math.min(raw, 1) * 100}%"></div>`
          : '';
      return `<td class="${cls}">${value}${bar}</td>`;
    };
    const cells = rows
      .map(
        (row) => `
        <tr><th>${row.label}</th>
          ${cell('v-original', row.values[0], row.raw[0])}
          ${cell('v-previous', row.values[1], row.raw[1])}
          ${cell('v-current', row.values[2], row.raw[2])}</tr>`,
      )
      .join('');
    return `
      <table class="metric-table">
        <tr><th></th><th class="v-original">original</th>
            <th class="v-previous">last</th><th class="v-current">current</th></tr>
        ${cells}
        <tr><th>samples</th><td colspan="3">${triple.current.sample_count}</td></tr>
      </table>`;
  }

  private confusionHtml(triple: MetricsTriple): string {
    const c = triple.current.classification?.confusion;
    if (!c) return '';
    return `
      <table class="confusion">
        <tr><th></th><th>pred +</th><th>pred −</th></tr>
        <tr><th>label +</th><td>${c.tp}</td><td>${c.fn}</td></tr>
        <tr><th>label −</th><td>${c.fp}</td><td>${c.tn}</td></tr>
      </table>`;
  }
}
