/**
 * Feature panel: overlaid full-vs-selected frequency histograms for every
 * other feature, in the server's distance order (most correlated first),
 * split into continuous and categorical lists.
 */

import { displayLabel } from '../canvas.js';
import type { AppState } from '../state.js';
import type { RankedFeaturePayload } from '../types.js';

const FULL_COLOR = 'rgba(31, 111, 235, 0.45)';
const SELECTED_COLOR = 'rgba(217, 119, 6, 0.6)';

export class FeaturePanel {
  constructor(private readonly root: HTMLElement) {
    root.innerHTML = '<h2>Correlated features</h2><div class="ranking"></div>';
  }

  render(state: AppState): void {
    const body = this.root.querySelector('.ranking')!;
    if (!state.correlation) {
      body.innerHTML = '<p class="hint">select a region to rank correlated features</p>';
      return;
    }
    body.innerHTML = '';
    const sections: [string, RankedFeaturePayload[]][] = [
      ['Continuous', state.correlation.continuous],
      ['Categorical', state.correlation.categorical],
    ];
    for (const [title, entries] of sections) {
      if (entries.length === 0) continue;
      const heading = document.createElement('h3');
      heading.textContent = title;
      body.appendChild(heading);
      for (const entry of entries) {
        body.appendChild(this.entryCard(entry));
      }
    }
  }

  private entryCard(entry: RankedFeaturePayload): HTMLElement {
    const card = document.createElement('div');
    card.className = 'ranking-card';
    const header = document.createElement('div');
    header.className = 'ranking-header';
    header.textContent = `${entry.name} — distance ${entry.distance.toFixed(4)}`;
    card.appendChild(header);
    card.appendChild(this.histogram(entry));
    return card;
  }

  /** Two overlaid bar series drawn as plain divs; heights are frequencies. */
  private histogram(entry: RankedFeaturePayload): HTMLElement {
    const box = document.createElement('div');
    box.className = 'histogram';
    const n = entry.full.length;
    const peak = Math.max(...entry.full, ...entry.selected, 1e-9);
    for (let i = 0; i < n; i += 1) {
      const slot = document.createElement('div');
      slot.className = 'histogram-slot';
      const full = document.createElement('div');
      full.className = 'bar';
      full.style.height = `${(entry.full[i] / peak) * 100}%`;
      full.style.background = FULL_COLOR;
      const selected = document.createElement('div');
      selected.className = 'bar overlay';
      selected.style.height = `${(entry.selected[i] / peak) * 100}%`;
      selected.style.background = SELECTED_COLOR;
      slot.appendChild(full);
      slot.appendChild(selected);
      slot.title = entry.bin_labels
        ? `${displayLabel(entry.bin_labels[i])}: all ${entry.full[i].toFixed(3)}, selected ${entry.selected[i].toFixed(3)}`
        : `edge ${entry.bin_edges![i]}: all ${entry.full[i].toFixed(3)}, selected ${entry.selected[i].toFixed(3)}`;
      box.appendChild(slot);
    }
    return box;
  }
}
