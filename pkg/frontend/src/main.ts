/**
 * Wires the four panels to the store and the protocol client. The server's
 * responses are the only source of truth; a full refresh reproduces the
 * entire display.
 */

import { ApiClient, httpTransport } from './api.js';
import { GamCanvas } from './canvas.js';
import { Controller } from './controller.js';
import { FeaturePanel } from './panels/features.js';
import { HistoryPanel } from './panels/history.js';
import { MetricPanel } from './panels/metrics.js';
import { Store } from './state.js';
import { Toolbar } from './toolbar.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const store = new Store();
  const controller = new Controller(new ApiClient(httpTransport()), store);

  const canvas = new GamCanvas(el<HTMLCanvasElement>('canvas'), {
    onSelect: (bins) => void controller.select(bins),
  });
  const toolbar = new Toolbar(el('toolbar'), controller);
  const metricPanel = new MetricPanel(el('metric-panel'), controller);
  const featurePanel = new FeaturePanel(el('feature-panel'));
  const historyPanel = new HistoryPanel(el('history-panel'), controller);

  const featureSelect = el<HTMLSelectElement>('feature-select');
  const modeToggle = el<HTMLButtonElement>('mode-toggle');
  const banner = el('banner');
  const status = el('status');
  const acceptButton = el<HTMLButtonElement>('accept');
  const discardButton = el<HTMLButtonElement>('discard');
  const undoButton = el<HTMLButtonElement>('undo');
  const redoButton = el<HTMLButtonElement>('redo');
  const saveButton = el<HTMLButtonElement>('save');

  featureSelect.addEventListener('change', () => {
    const value = featureSelect.value;
    if (value.startsWith('interaction:')) {
      const [a, b] = value.slice('interaction:'.length).split('|');
      void controller.openInteraction(a, b);
    } else {
      void controller.openFeature(value);
    }
  });
  modeToggle.addEventListener('click', () => {
    controller.setMode(store.get().mode === 'move' ? 'select' : 'move');
  });
  acceptButton.addEventListener('click', () => void controller.resolve(true));
  discardButton.addEventListener('click', () => void controller.resolve(false));
  undoButton.addEventListener('click', () => void controller.undo());
  redoButton.addEventListener('click', () => void controller.redo());
  saveButton.addEventListener('click', async () => {
    const file = await controller.save();
    if (file !== null) {
      const blob = new Blob([file], { type: 'application/json' });
      const link = document.createElement('a');
      link.href = URL.createObjectURL(blob);
      link.download = 'edited-model.json';
      link.click();
      URL.revokeObjectURL(link.href);
    }
  });

  let featureOptionsKey = '';
  store.subscribe((state) => {
    // feature drop-down (rebuilt only when the list changes)
    const key = state.features.map((f) => f.name).join('|');
    if (key !== featureOptionsKey && state.model) {
      featureOptionsKey = key;
      featureSelect.innerHTML = '';
      for (const feature of state.features) {
        const option = document.createElement('option');
        option.value = feature.name;
        option.textContent = `${feature.name} (${feature.importance.toFixed(3)})`;
        featureSelect.appendChild(option);
      }
      for (const pair of state.model.interactions) {
        const option = document.createElement('option');
        option.value = `interaction:${pair.feature_a}|${pair.feature_b}`;
        option.textContent = `${pair.feature_a} x ${pair.feature_b} (read-only)`;
        featureSelect.appendChild(option);
      }
    }
    if (state.currentFeature && !state.interactionPayload) {
      featureSelect.value = state.currentFeature;
    }

    modeToggle.textContent = state.mode === 'move' ? 'mode: move' : 'mode: select';
    banner.textContent = state.banner ?? '';
    banner.style.display = state.banner ? 'block' : 'none';

    const parts: string[] = [];
    if (state.selection) {
      parts.push(`${state.selection.bins.length} bins selected`);
      const inRange = state.selectionMetrics?.current.sample_count;
      if (inRange !== undefined) parts.push(`${inRange} samples in range`);
    }
    if (state.staged) {
      parts.push(state.staged.noop ? 'staged edit changes nothing' : 'edit staged');
    } else if (state.history && state.history.head !== 'ROOT') {
      const head = state.history.commits.find((c) => c.id === state.history!.head);
      if (head) parts.push(`last edit: ${head.message}`);
    }
    status.textContent = parts.join(' · ');

    const hasStaged = state.staged !== null;
    acceptButton.style.display = hasStaged ? 'inline-block' : 'none';
    discardButton.style.display = hasStaged ? 'inline-block' : 'none';
    acceptButton.disabled = state.busy || state.staged?.noop === true;
    discardButton.disabled = state.busy;
    undoButton.disabled = state.busy || hasStaged || !state.canUndo;
    redoButton.disabled = state.busy || hasStaged || !state.canRedo;
    saveButton.disabled = state.busy || hasStaged;

    canvas.render(state);
    toolbar.render(state);
    metricPanel.render(state);
    featurePanel.render(state);
    historyPanel.render(state);
  });

  controller.boot().catch((error) => {
    banner.textContent = `failed to load the session: ${error}`;
    banner.style.display = 'block';
  });
}

main();
