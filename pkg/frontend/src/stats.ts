export function mean(values: number[]): number {
  if (values.length === 0) throw new Error("mean of empty list");
  return values.reduce((a, b) => a + b, 0) / values.length;
}

export function sampleStd(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  const ss = values.reduce((a, b) => a + (b - m) * (b - m), 0);
  return Math.sqrt(ss / (values.length - 1));
}

export function normalPdf(x: number, mu: number, sigma: number): number {
  if (sigma <= 0) return x === mu ? Infinity : 0;
  const z = (x - mu) / sigma;
  return Math.exp(-0.5 * z * z) / (sigma * Math.sqrt(2 * Math.PI));
}

export interface Histogram {
  edges: number[]; // length bins + 1
  counts: number[]; // length bins
}

export function histogram(values: number[], bins: number): Histogram {
  if (values.length === 0) throw new Error("histogram of empty list");
  if (bins < 1) throw new Error("bins must be >= 1");
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const width = (hi - lo) / bins;
  const edges = Array.from({ length: bins + 1 }, (_, i) => lo + i * width);
  const counts = new Array(bins).fill(0);
  for (const v of values) {
    let idx = Math.floor((v - lo) / width);
    if (idx === bins) idx = bins - 1; // max value lands in the last bin
    counts[idx] += 1;
  }
  return { edges, counts };
}
