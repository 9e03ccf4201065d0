/** Display formatting: probabilities 2 decimals, inference values 4. */

export function formatProbability(p: number): string {
  return p.toFixed(2);
}

export function formatInference(v: number): string {
  return v.toFixed(4);
}

export function formatInterval(lo: number, hi: number): string {
  return `(${formatInference(lo)}, ${formatInference(hi)})`;
}
