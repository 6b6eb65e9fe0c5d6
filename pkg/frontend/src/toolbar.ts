/**
 * Context toolbar: appears over a non-empty selection, offering the tools
 * valid for the term kind. Ordered-axis tools (interpolate, monotonize)
 * are disabled on categorical terms. Tool clicks hand an op spec to the
 * controller, which issues PreviewEdit.
 */

import { Controller } from './controller.js';
import type { AppState } from './state.js';
import type { EditOpSpec } from './types.js';

interface ToolButton {
  id: string;
  label: string;
  title: string;
  needsOrderedAxis: boolean;
  op: () => Omit<EditOpSpec, 'term' | 'bins'> | null;
}

export class Toolbar {
  private buttons: { spec: ToolButton; el: HTMLButtonElement }[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly controller: Controller,
  ) {
    const specs: ToolButton[] = [
      {
        id: 'move-up', label: '▲', title: 'move selected scores up',
        needsOrderedAxis: false,
        op: () => ({ tool: 'move', delta: this.moveStep() }),
      },
      {
        id: 'move-down', label: '▼', title: 'move selected scores down',
        needsOrderedAxis: false,
        op: () => ({ tool: 'move', delta: -this.moveStep() }),
      },
      {
        id: 'interpolate', label: '∕', title: 'linear interpolation',
        needsOrderedAxis: true,
        op: () => ({ tool: 'interpolate', mode: 'linear' }),
      },
      {
        id: 'interpolate-eq', label: '▤', title: 'interpolate into equal bins',
        needsOrderedAxis: true,
        op: () => {
          const raw = window.prompt('number of equal segments', '2');
          if (!raw) return null;
          return { tool: 'interpolate', mode: 'equal_bins', segments: Number(raw) };
        },
      },
      {
        id: 'interpolate-reg', label: '〜', title: 'fit a weighted regression line',
        needsOrderedAxis: true,
        op: () => ({ tool: 'interpolate', mode: 'regression' }),
      },
      {
        id: 'mono-inc', label: '↗', title: 'make monotonically increasing',
        needsOrderedAxis: true,
        op: () => ({ tool: 'monotonize', direction: 'increasing' }),
      },
      {
        id: 'mono-dec', label: '↘', title: 'make monotonically decreasing',
        needsOrderedAxis: true,
        op: () => ({ tool: 'monotonize', direction: 'decreasing' }),
      },
      {
        id: 'align-left', label: '⊢', title: 'align to the leftmost bin',
        needsOrderedAxis: false,
        op: () => ({ tool: 'align', anchor: 'left' }),
      },
      {
        id: 'align-right', label: '⊣', title: 'align to the rightmost bin',
        needsOrderedAxis: false,
        op: () => ({ tool: 'align', anchor: 'right' }),
      },
      {
        id: 'align-mean', label: '≡', title: 'align to the count-weighted mean',
        needsOrderedAxis: false,
        op: () => ({ tool: 'align', anchor: 'weighted_mean' }),
      },
      {
        id: 'delete', label: '∅', title: 'set selected scores to zero',
        needsOrderedAxis: false,
        op: () => ({ tool: 'delete' }),
      },
    ];
    for (const spec of specs) {
      const el = document.createElement('button');
      el.className = 'tool';
      el.textContent = spec.label;
      el.title = spec.title;
      el.addEventListener('click', () => {
        const op = spec.op();
        if (op) void this.controller.applyTool(op);
      });
      root.appendChild(el);
      this.buttons.push({ spec, el });
    }
  }

  private moveStep(): number {
    const raw = window.prompt('score delta', '0.1');
    return raw ? Number(raw) : 0;
  }

  render(state: AppState): void {
    const feature = state.featurePayload;
    const active = Boolean(state.selection && feature);
    this.root.style.display = active ? 'flex' : 'none';
    if (!active || !feature) return;
    const ordered = feature.kind === 'continuous';
    const multi = (state.selection?.bins.length ?? 0) >= 2;
    for (const { spec, el } of this.buttons) {
      const needsTwo = spec.needsOrderedAxis && spec.id.startsWith('interpolate');
      const allowed = (!spec.needsOrderedAxis || ordered) && (!needsTwo || multi);
      el.disabled = !allowed || state.busy || state.staged !== null;
    }
  }
}
