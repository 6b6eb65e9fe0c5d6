/**
 * Shape-function canvas: step line with bin-start dots for continuous
 * terms, bars for categorical terms, a read-only heatmap for interaction
 * grids. Move mode pans/zooms the viewport; select mode draws a marquee
 * that snaps outward to whole bins before reaching the controller.
 */

import { snapToBars, snapToBins } from './snap.js';
import type { AppState } from './state.js';
import type { FeaturePayload, InteractionPayload } from './types.js';

const COLORS = {
  current: '#1f6feb',
  currentFill: 'rgba(31, 111, 235, 0.25)',
  original: '#9aa4af',
  edited: '#d97706',
  band: 'rgba(31, 111, 235, 0.12)',
  zeroLine: '#6b7280',
  axis: '#374151',
  grid: '#e5e7eb',
  marquee: 'rgba(31, 111, 235, 0.15)',
  marqueeBorder: 'rgba(31, 111, 235, 0.7)',
  selection: 'rgba(217, 119, 6, 0.12)',
};

const PADDING = { top: 14, right: 16, bottom: 30, left: 52 };
const DOT_RADIUS = 2.5;
const MIN_DRAG = 3; // px before a gesture counts as a drag

interface Viewport {
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export interface CanvasCallbacks {
  onSelect(bins: number[]): void;
}

export class GamCanvas {
  private ctx: CanvasRenderingContext2D;
  private view: Viewport | null = null;
  private state: AppState | null = null;
  private featureKey: string | null = null;
  private drag: { startX: number; startY: number; lastX: number; lastY: number } | null = null;
  private marquee: { x0: number; x1: number } | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly callbacks: CanvasCallbacks,
  ) {
    const ctx = canvas.getContext('2d');
    if (!ctx) throw new Error('canvas 2d context unavailable');
    this.ctx = ctx;
    canvas.addEventListener('mousedown', (e) => this.onMouseDown(e));
    window.addEventListener('mousemove', (e) => this.onMouseMove(e));
    window.addEventListener('mouseup', () => this.onMouseUp());
    canvas.addEventListener('wheel', (e) => this.onWheel(e), { passive: false });
  }

  render(state: AppState): void {
    this.state = state;
    const key = state.currentFeature;
    if (key !== this.featureKey) {
      this.featureKey = key;
      this.view = null; // reset the viewport when the feature changes
    }
    this.resize();
    this.clear();
    if (state.interactionPayload) {
      this.drawHeatmap(state.interactionPayload);
      return;
    }
    const feature = state.featurePayload;
    if (!feature) return;
    if (!this.view) this.view = this.defaultViewport(feature);
    if (feature.kind === 'continuous') this.drawContinuous(feature);
    else this.drawCategorical(feature);
    this.drawMarquee();
  }

  // -- geometry ----------------------------------------------------------

  private resize(): void {
    const rect = this.canvas.getBoundingClientRect();
    const ratio = window.devicePixelRatio || 1;
    const w = Math.max(rect.width, 200);
    const h = Math.max(rect.height, 160);
    if (this.canvas.width !== w * ratio || this.canvas.height !== h * ratio) {
      this.canvas.width = w * ratio;
      this.canvas.height = h * ratio;
    }
    this.ctx.setTransform(ratio, 0, 0, ratio, 0, 0);
  }

  private plotWidth(): number {
    return this.canvas.getBoundingClientRect().width - PADDING.left - PADDING.right;
  }

  private plotHeight(): number {
    return this.canvas.getBoundingClientRect().height - PADDING.top - PADDING.bottom;
  }

  /** Last bin gets the median bin width so it has visible extent. */
  private axisMax(feature: FeaturePayload): number {
    const edges = feature.bin_edges ?? [];
    if (edges.length < 2) return (edges[0] ?? 0) + 1;
    const widths = edges.slice(1).map((e, i) => e - edges[i]).sort((a, b) => a - b);
    return edges[edges.length - 1] + widths[Math.floor(widths.length / 2)];
  }

  private defaultViewport(feature: FeaturePayload): Viewport {
    const values: number[] = [...feature.scores, ...feature.original_scores, 0];
    if (feature.score_stddev) {
      feature.scores.forEach((s, i) => {
        values.push(s + feature.score_stddev![i], s - feature.score_stddev![i]);
      });
    }
    let yMin = Math.min(...values);
    let yMax = Math.max(...values);
    const pad = (yMax - yMin || 1) * 0.15;
    yMin -= pad;
    yMax += pad;
    if (feature.kind === 'continuous') {
      const edges = feature.bin_edges ?? [0];
      return { xMin: edges[0], xMax: this.axisMax(feature), yMin, yMax };
    }
    return { xMin: 0, xMax: feature.scores.length, yMin, yMax };
  }

  private toPxX(x: number): number {
    const v = this.view!;
    return PADDING.left + ((x - v.xMin) / (v.xMax - v.xMin)) * this.plotWidth();
  }

  private toPxY(y: number): number {
    const v = this.view!;
    return PADDING.top + (1 - (y - v.yMin) / (v.yMax - v.yMin)) * this.plotHeight();
  }

  private toDataX(px: number): number {
    const v = this.view!;
    return v.xMin + ((px - PADDING.left) / this.plotWidth()) * (v.xMax - v.xMin);
  }

  // -- drawing -----------------------------------------------------------

  private clear(): void {
    const rect = this.canvas.getBoundingClientRect();
    this.ctx.clearRect(0, 0, rect.width, rect.height);
  }

  private drawFrame(xLabel: (x: number) => string): void {
    const ctx = this.ctx;
    const v = this.view!;
    const w = this.plotWidth();
    const h = this.plotHeight();
    ctx.strokeStyle = COLORS.grid;
    ctx.lineWidth = 1;
    ctx.font = '10px system-ui, sans-serif';
    ctx.fillStyle = COLORS.axis;
    const ySteps = 5;
    for (let i = 0; i <= ySteps; i += 1) {
      const y = v.yMin + ((v.yMax - v.yMin) * i) / ySteps;
      const py = this.toPxY(y);
      ctx.beginPath();
      ctx.moveTo(PADDING.left, py);
      ctx.lineTo(PADDING.left + w, py);
      ctx.stroke();
      ctx.fillText(y.toFixed(2), 6, py + 3);
    }
    const xSteps = 6;
    for (let i = 0; i <= xSteps; i += 1) {
      const x = v.xMin + ((v.xMax - v.xMin) * i) / xSteps;
      ctx.fillText(xLabel(x), this.toPxX(x) - 8, PADDING.top + h + 18);
    }
    // zero baseline
    if (v.yMin < 0 && v.yMax > 0) {
      ctx.strokeStyle = COLORS.zeroLine;
      ctx.setLineDash([6, 4]);
      ctx.beginPath();
      ctx.moveTo(PADDING.left, this.toPxY(0));
      ctx.lineTo(PADDING.left + w, this.toPxY(0));
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }

  private clipToPlot(): void {
    this.ctx.save();
    this.ctx.beginPath();
    this.ctx.rect(PADDING.left, PADDING.top, this.plotWidth(), this.plotHeight());
    this.ctx.clip();
  }

  private drawContinuous(feature: FeaturePayload): void {
    const ctx = this.ctx;
    const edges = feature.bin_edges!;
    const axisMax = this.axisMax(feature);
    const rightOf = (i: number) => (i + 1 < edges.length ? edges[i + 1] : axisMax);
    this.drawFrame((x) => formatTick(x));
    this.clipToPlot();

    // selection backdrop
    const selection = this.currentSelection();
    if (selection) {
      ctx.fillStyle = COLORS.selection;
      for (const i of selection) {
        const x0 = this.toPxX(edges[i]);
        const x1 = this.toPxX(rightOf(i));
        ctx.fillRect(x0, PADDING.top, x1 - x0, this.plotHeight());
      }
    }

    // confidence band
    if (feature.score_stddev) {
      ctx.fillStyle = COLORS.band;
      for (let i = 0; i < edges.length; i += 1) {
        const x0 = this.toPxX(edges[i]);
        const x1 = this.toPxX(rightOf(i));
        const yTop = this.toPxY(feature.scores[i] + feature.score_stddev[i]);
        const yBottom = this.toPxY(feature.scores[i] - feature.score_stddev[i]);
        ctx.fillRect(x0, yTop, x1 - x0, yBottom - yTop);
      }
    }

    // original trace where it differs from the current scores
    ctx.strokeStyle = COLORS.original;
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    for (let i = 0; i < edges.length; i += 1) {
      if (feature.original_scores[i] === feature.scores[i]) continue;
      const y = this.toPxY(feature.original_scores[i]);
      ctx.moveTo(this.toPxX(edges[i]), y);
      ctx.lineTo(this.toPxX(rightOf(i)), y);
    }
    ctx.stroke();
    ctx.setLineDash([]);

    // current step line, edited bins in a distinct color
    const staged = this.stagedBins(feature.name);
    for (let i = 0; i < edges.length; i += 1) {
      const edited = feature.original_scores[i] !== feature.scores[i] || staged.has(i);
      ctx.strokeStyle = edited ? COLORS.edited : COLORS.current;
      ctx.lineWidth = 2;
      const y = this.toPxY(feature.scores[i]);
      ctx.beginPath();
      ctx.moveTo(this.toPxX(edges[i]), y);
      ctx.lineTo(this.toPxX(rightOf(i)), y);
      ctx.stroke();
      ctx.fillStyle = edited ? COLORS.edited : COLORS.current;
      ctx.beginPath();
      ctx.arc(this.toPxX(edges[i]), y, DOT_RADIUS, 0, Math.PI * 2);
      ctx.fill();
    }
    ctx.restore();
  }

  private drawCategorical(feature: FeaturePayload): void {
    const ctx = this.ctx;
    const labels = feature.bin_labels!;
    this.drawFrame((x) => {
      const i = Math.floor(x);
      return i >= 0 && i < labels.length && Math.abs(x - i - 0.5) < 0.5 ? displayLabel(labels[i]) : '';
    });
    this.clipToPlot();
    const selection = new Set(this.currentSelection() ?? []);
    const y0 = this.toPxY(0);
    for (let i = 0; i < labels.length; i += 1) {
      const edited = feature.original_scores[i] !== feature.scores[i];
      const x0 = this.toPxX(i + 0.1);
      const x1 = this.toPxX(i + 0.9);
      const y = this.toPxY(feature.scores[i]);
      ctx.fillStyle = edited ? COLORS.edited : COLORS.currentFill;
      ctx.strokeStyle = edited ? COLORS.edited : COLORS.current;
      ctx.lineWidth = selection.has(i) ? 3 : 1.5;
      ctx.beginPath();
      ctx.rect(x0, Math.min(y, y0), x1 - x0, Math.abs(y0 - y));
      ctx.fill();
      ctx.stroke();
      if (feature.score_stddev) {
        const cx = this.toPxX(i + 0.5);
        ctx.strokeStyle = COLORS.axis;
        ctx.lineWidth = 1;
        ctx.beginPath();
        ctx.moveTo(cx, this.toPxY(feature.scores[i] - feature.score_stddev[i]));
        ctx.lineTo(cx, this.toPxY(feature.scores[i] + feature.score_stddev[i]));
        ctx.stroke();
      }
    }
    ctx.restore();
  }

  private drawHeatmap(grid: InteractionPayload): void {
    const ctx = this.ctx;
    const rows = grid.scores.length;
    const cols = rows > 0 ? grid.scores[0].length : 0;
    if (rows === 0 || cols === 0) return;
    const w = this.plotWidth();
    const h = this.plotHeight();
    let magnitude = 0;
    for (const row of grid.scores) {
      for (const value of row) magnitude = Math.max(magnitude, Math.abs(value));
    }
    for (let r = 0; r < rows; r += 1) {
      for (let c = 0; c < cols; c += 1) {
        ctx.fillStyle = divergingColor(grid.scores[r][c], magnitude || 1);
        ctx.fillRect(
          PADDING.left + (c / cols) * w,
          PADDING.top + (r / rows) * h,
          w / cols + 0.5,
          h / rows + 0.5,
        );
      }
    }
    ctx.fillStyle = COLORS.axis;
    ctx.font = '11px system-ui, sans-serif';
    ctx.fillText(`${grid.feature_a} (rows) x ${grid.feature_b} (columns), read-only`, PADDING.left, 10);
  }

  private drawMarquee(): void {
    if (!this.marquee) return;
    const ctx = this.ctx;
    const x0 = Math.min(this.marquee.x0, this.marquee.x1);
    const x1 = Math.max(this.marquee.x0, this.marquee.x1);
    ctx.fillStyle = COLORS.marquee;
    ctx.strokeStyle = COLORS.marqueeBorder;
    ctx.fillRect(x0, PADDING.top, x1 - x0, this.plotHeight());
    ctx.strokeRect(x0, PADDING.top, x1 - x0, this.plotHeight());
  }

  private currentSelection(): number[] | null {
    const state = this.state;
    if (!state?.selection || state.selection.term !== state.currentFeature) return null;
    return state.selection.bins;
  }

  private stagedBins(term: string): Set<number> {
    const staged = this.state?.staged;
    if (!staged || staged.diff.term !== term) return new Set();
    return new Set(staged.diff.bins);
  }

  // -- interaction -------------------------------------------------------

  private localPoint(e: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return { x: e.clientX - rect.left, y: e.clientY - rect.top };
  }

  private onMouseDown(e: MouseEvent): void {
    if (!this.state?.featurePayload) return;
    const p = this.localPoint(e);
    this.drag = { startX: p.x, startY: p.y, lastX: p.x, lastY: p.y };
    if (this.state.mode === 'select') {
      this.marquee = { x0: p.x, x1: p.x };
    }
    e.preventDefault();
  }

  private onMouseMove(e: MouseEvent): void {
    if (!this.drag || !this.state || !this.view) return;
    const p = this.localPoint(e);
    if (this.state.mode === 'move') {
      const v = this.view;
      const dx = ((p.x - this.drag.lastX) / this.plotWidth()) * (v.xMax - v.xMin);
      const dy = ((p.y - this.drag.lastY) / this.plotHeight()) * (v.yMax - v.yMin);
      this.view = { xMin: v.xMin - dx, xMax: v.xMax - dx, yMin: v.yMin + dy, yMax: v.yMax + dy };
    } else if (this.marquee) {
      this.marquee.x1 = p.x;
    }
    this.drag.lastX = p.x;
    this.drag.lastY = p.y;
    if (this.state) this.render(this.state);
  }

  private onMouseUp(): void {
    if (!this.drag || !this.state) return;
    const wasClick =
      Math.abs(this.drag.lastX - this.drag.startX) < MIN_DRAG &&
      Math.abs(this.drag.lastY - this.drag.startY) < MIN_DRAG;
    const marquee = this.marquee;
    this.drag = null;
    this.marquee = null;
    const feature = this.state.featurePayload;
    if (this.state.mode !== 'select' || !feature || !this.view) {
      this.render(this.state);
      return;
    }
    if (wasClick || !marquee) {
      this.callbacks.onSelect([]); // empty drag clears the selection
      return;
    }
    const lo = this.toDataX(Math.min(marquee.x0, marquee.x1));
    const hi = this.toDataX(Math.max(marquee.x0, marquee.x1));
    if (feature.kind === 'continuous') {
      const snapped = snapToBins(lo, hi, feature.bin_edges!, this.axisMax(feature));
      this.callbacks.onSelect(snapped ? snapped.indices : []);
    } else {
      this.callbacks.onSelect(snapToBars(lo, hi, feature.scores.length));
    }
  }

  private onWheel(e: WheelEvent): void {
    if (!this.view || this.state?.mode !== 'move') return;
    e.preventDefault();
    const p = this.localPoint(e);
    const v = this.view;
    const factor = e.deltaY > 0 ? 1.15 : 1 / 1.15;
    const fx = (p.x - PADDING.left) / this.plotWidth();
    const fy = 1 - (p.y - PADDING.top) / this.plotHeight();
    const cx = v.xMin + fx * (v.xMax - v.xMin);
    const cy = v.yMin + fy * (v.yMax - v.yMin);
    this.view = {
      xMin: cx - (cx - v.xMin) * factor,
      xMax: cx + (v.xMax - cx) * factor,
      yMin: cy - (cy - v.yMin) * factor,
      yMax: cy + (v.yMax - cy) * factor,
    };
    if (this.state) this.render(this.state);
  }
}

function formatTick(x: number): string {
  if (Math.abs(x) >= 1000) return x.toFixed(0);
  if (Number.isInteger(x)) return String(x);
  return x.toFixed(1);
}

export function displayLabel(label: string): string {
  return label === '' ? '(missing)' : label;
}

function divergingColor(value: number, magnitude: number): string {
  const t = Math.max(-1, Math.min(1, value / magnitude));
  if (t >= 0) {
    const s = Math.round(255 - t * 160);
    return `rgb(${s}, ${s}, 255)`;
  }
  const s = Math.round(255 + t * 160);
  return `rgb(255, ${s}, ${s})`;
}
