/** Minimal deterministic SVG builder: no timestamps, fixed styling,
 * fixed coordinate formatting, so identical input gives identical
 * bytes. */

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { top: 36, right: 24, bottom: 52, left: 64 };

export const METHOD_COLORS: Record<string, string> = {
  rs: "#1f77b4",
  rp: "#ff7f0e",
  srp: "#2ca02c",
  pca: "#d62728",
  rs_hh: "#9467bd",
};

export function colorFor(method: string): string {
  return METHOD_COLORS[method] ?? "#7f7f7f";
}

export function fmt(x: number): string {
  return x.toFixed(2);
}

export interface Scale {
  (v: number): number;
  ticks(): number[];
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo === hi) {
    lo -= 0.05;
    hi += 0.05;
  }
  const f = ((v: number) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo)) as Scale;
  f.ticks = () => {
    const span = hi - lo;
    const raw = span / 6;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= 7) ?? 10 * mag;
    const start = Math.ceil(lo / step) * step;
    const out: number[] = [];
    for (let t = start; t <= hi + 1e-12 * span; t += step) {
      out.push(Number(t.toPrecision(12)));
    }
    return out;
  };
  return f;
}

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  if (lo <= 0) throw new Error("log scale needs positive values");
  if (lo === hi) {
    lo /= 2;
    hi *= 2;
  }
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const f = ((v: number) => outLo + ((Math.log10(v) - llo) / (lhi - llo)) * (outHi - outLo)) as Scale;
  f.ticks = () => {
    const out: number[] = [];
    for (let e = Math.ceil(llo); e <= Math.floor(lhi); e++) {
      out.push(Math.pow(10, e));
    }
    return out.length >= 2 ? out : [lo, hi];
  };
  return f;
}

export function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function polyline(points: Array<[number, number]>, attrs: string): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${pts}" ${attrs}/>`;
}

export function polygon(points: Array<[number, number]>, attrs: string): string {
  const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polygon points="${pts}" ${attrs}/>`;
}

export function circle(x: number, y: number, r: number, attrs: string): string {
  return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" ${attrs}/>`;
}

export function rect(x: number, y: number, w: number, h: number, attrs: string): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(Math.max(w, 0))}" height="${fmt(Math.max(h, 0))}" ${attrs}/>`;
}

export function text(x: number, y: number, content: string, attrs = ""): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" font-family="sans-serif" ${attrs}>${esc(content)}</text>`;
}

export interface AxisLabels {
  x: string;
  y: string;
  title: string;
}

export function frame(
  xs: Scale,
  ys: Scale,
  labels: AxisLabels,
  xTickFmt: (t: number) => string = (t) => String(t),
  yTickFmt: (t: number) => string = (t) => String(t),
): string {
  const { top, bottom, left, right } = MARGIN;
  const parts: string[] = [];
  parts.push(rect(left, top, WIDTH - left - right, HEIGHT - top - bottom, 'fill="none" stroke="#333"'));
  for (const t of xs.ticks()) {
    const x = xs(t);
    parts.push(`<line x1="${fmt(x)}" y1="${fmt(HEIGHT - bottom)}" x2="${fmt(x)}" y2="${fmt(HEIGHT - bottom + 5)}" stroke="#333"/>`);
    parts.push(text(x, HEIGHT - bottom + 18, xTickFmt(t), 'font-size="11" text-anchor="middle"'));
  }
  for (const t of ys.ticks()) {
    const y = ys(t);
    parts.push(`<line x1="${fmt(left - 5)}" y1="${fmt(y)}" x2="${fmt(left)}" y2="${fmt(y)}" stroke="#333"/>`);
    parts.push(text(left - 8, y + 4, yTickFmt(t), 'font-size="11" text-anchor="end"'));
  }
  parts.push(text(WIDTH / 2, HEIGHT - 14, labels.x, 'font-size="13" text-anchor="middle"'));
  parts.push(
    `<text x="18" y="${fmt(HEIGHT / 2)}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 ${fmt(HEIGHT / 2)})">${esc(labels.y)}</text>`,
  );
  parts.push(text(WIDTH / 2, 22, labels.title, 'font-size="15" text-anchor="middle"'));
  return parts.join("\n");
}

export function legend(methods: string[]): string {
  const parts: string[] = [];
  methods.forEach((m, i) => {
    const x = MARGIN.left + 12;
    const y = MARGIN.top + 16 + 18 * i;
    parts.push(`<line x1="${fmt(x)}" y1="${fmt(y - 4)}" x2="${fmt(x + 22)}" y2="${fmt(y - 4)}" stroke="${colorFor(m)}" stroke-width="2"/>`);
    parts.push(text(x + 28, y, m, 'font-size="12"'));
  });
  return parts.join("\n");
}

export function document(body: string): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n${body}\n</svg>\n`;
}
