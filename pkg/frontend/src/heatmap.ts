import { HeatmapGrid } from './types';

/**
 * Map a saliency grid to RGBA pixels (hot colormap, alpha follows intensity).
 * Values are normalized by the grid's own peak; an all-zero grid renders
 * fully transparent.
 */
export function gridToRgba(grid: HeatmapGrid): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(grid.w * grid.h * 4);
  const peak = Math.max(...grid.values, 0);
  for (let i = 0; i < grid.values.length; i++) {
    const t = peak > 0 ? grid.values[i] / peak : 0;
    out[i * 4 + 0] = Math.round(255 * t);
    out[i * 4 + 1] = Math.round(140 * t * t);
    out[i * 4 + 2] = Math.round(40 * (1 - t) * t);
    out[i * 4 + 3] = Math.round(210 * t);
  }
  return out;
}

export function isSilent(grid: HeatmapGrid): boolean {
  return grid.values.every((v) => v === 0);
}

/** -1 -> "L100", 0 -> "C", +0.45 -> "R45" */
export function formatPan(pan: number): string {
  const magnitude = Math.round(Math.abs(pan) * 100);
  if (magnitude === 0) return 'C';
  return (pan < 0 ? 'L' : 'R') + magnitude;
}

export function formatGain(gain: number): string {
  return `${Math.round(gain * 100)}%`;
}

/** Position of the pan indicator within a bar of the given pixel width. */
export function panIndicatorX(pan: number, barWidth: number): number {
  const clamped = Math.min(1, Math.max(-1, pan));
  return ((clamped + 1) / 2) * barWidth;
}
