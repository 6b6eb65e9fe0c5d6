/**
 * Pure display formatting. Values pass through verbatim (rounded for
 * display only); nothing here derives new numbers from other numbers.
 */

import type { MetricReportPayload } from './types.js';

export function formatMetric(value: number | null | undefined): string {
  if (value === null || value === undefined) return 'n/a';
  return value.toFixed(4);
}

export interface MetricRow {
  label: string;
  values: [string, string, string]; // original / previous / current
  raw: [number | null, number | null, number | null];
}

/** Rows for the metric panel; every number comes from the three reports. */
export function metricRows(
  original: MetricReportPayload,
  previous: MetricReportPayload,
  current: MetricReportPayload,
): MetricRow[] {
  const rows: MetricRow[] = [];
  const push = (label: string, pick: (r: MetricReportPayload) => number | null | undefined) => {
    const raw: [number | null, number | null, number | null] = [
      pick(original) ?? null,
      pick(previous) ?? null,
      pick(current) ?? null,
    ];
    rows.push({
      label,
      raw,
      values: [formatMetric(raw[0]), formatMetric(raw[1]), formatMetric(raw[2])],
    });
  };
  if (current.classification) {
    push('accuracy', (r) => r.classification?.accuracy);
    push('balanced acc.', (r) => r.classification?.balanced_accuracy);
    push('AUC', (r) => r.classification?.auc);
  }
  if (current.regression) {
    push('RMSE', (r) => r.regression?.rmse);
    push('MAE', (r) => r.regression?.mae);
    push('MAPE', (r) => r.regression?.mape);
  }
  return rows;
}

export function formatTimestamp(ms: number): string {
  return new Date(ms).toISOString().replace('T', ' ').slice(0, 19);
}
