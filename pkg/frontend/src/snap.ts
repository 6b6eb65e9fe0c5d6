/**
 * Marquee snapping: edits are per-bin, so a drag rectangle always grows
 * outward to whole bins. The resulting selection's x-range contains the
 * dragged range (clipped to the data domain).
 */

export interface SnappedSelection {
  /** Sorted, contiguous bin indices covered by the drag. */
  indices: number[];
  /** The selection's own x-range after snapping, [left, right]. */
  xRange: [number, number];
}

/**
 * Snap a drag over a continuous axis to whole bins.
 *
 * Bins are [edges[i], edges[i+1]) with the last bin running to axisMax.
 * Returns null when the drag misses the data domain entirely.
 */
export function snapToBins(
  x0: number,
  x1: number,
  edges: number[],
  axisMax: number,
): SnappedSelection | null {
  if (edges.length === 0) return null;
  let lo = Math.min(x0, x1);
  let hi = Math.max(x0, x1);
  lo = Math.max(lo, edges[0]);
  hi = Math.min(hi, axisMax);
  if (lo > hi) return null;
  const first = binOf(lo, edges);
  const last = binOf(hi, edges);
  const indices: number[] = [];
  for (let i = first; i <= last; i += 1) indices.push(i);
  const right = last + 1 < edges.length ? edges[last + 1] : axisMax;
  return { indices, xRange: [edges[first], right] };
}

/** Largest i with edges[i] <= x, clamped into range. */
function binOf(x: number, edges: number[]): number {
  let lo = 0;
  let hi = edges.length - 1;
  if (x < edges[0]) return 0;
  while (lo < hi) {
    const mid = (lo + hi + 1) >> 1;
    if (edges[mid] <= x) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

/**
 * Snap a drag over categorical slots. Slot i occupies [i, i+1) in category
 * coordinates; every slot the drag touches is selected.
 */
export function snapToBars(x0: number, x1: number, slotCount: number): number[] {
  if (slotCount <= 0) return [];
  const lo = Math.max(Math.min(x0, x1), 0);
  const hi = Math.min(Math.max(x0, x1), slotCount);
  if (lo > hi) return [];
  let first = Math.min(Math.floor(lo), slotCount - 1);
  let last = hi === lo ? first : Math.ceil(hi) - 1;
  last = Math.min(Math.max(last, first), slotCount - 1);
  const indices: number[] = [];
  for (let i = first; i <= last; i += 1) indices.push(i);
  return indices;
}
