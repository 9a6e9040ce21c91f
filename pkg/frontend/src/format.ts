/** Number formatting: probabilities always at 3 decimal places. */

export function formatProbability(p: number): string {
  return p.toFixed(3);
}

export function formatDelta(d: number): string {
  const text = d.toFixed(3);
  return d > 0 ? `+${text}` : text;
}

/** Bar geometry helper; clamps to the [0, 1] gauge range. */
export function barFraction(p: number): number {
  return Math.min(1, Math.max(0, p));
}
