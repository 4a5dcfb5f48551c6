import { CsvTable, num, requireColumns } from "./csv.js";
import { histogram, mean, normalPdf, sampleStd } from "./stats.js";
import * as svg from "./svg.js";

export type PlotKind = "band" | "histogram" | "runtime";

export interface PlotOptions {
  methods?: string[]; // filter; default: every method present
  bins?: number; // histogram only
  title?: string;
}

export interface RenderResult {
  svg: string;
  summary: Record<string, number | string>;
}

function selectMethods(rows: Record<string, string>[], wanted?: string[]): string[] {
  const present: string[] = [];
  for (const row of rows) {
    if (!present.includes(row.method)) present.push(row.method);
  }
  const methods = wanted && wanted.length > 0 ? present.filter((m) => wanted.includes(m)) : present;
  if (methods.length === 0) {
    throw new Error(`no rows selected (methods present: ${present.join(", ") || "none"})`);
  }
  return methods;
}

/** Mean line with a shaded 5th-95th percentile region per method vs k,
 * repeats averaged. */
export function renderBand(table: CsvTable, opts: PlotOptions = {}): RenderResult {
  requireColumns(table, ["method", "k", "mean_ratio", "p5", "p95"]);
  const methods = selectMethods(table.rows, opts.methods);
  const perMethod = new Map<string, Map<number, { mean: number[]; p5: number[]; p95: number[] }>>();
  for (const row of table.rows) {
    if (!methods.includes(row.method)) continue;
    const k = num(row, "k");
    let byK = perMethod.get(row.method);
    if (!byK) perMethod.set(row.method, (byK = new Map()));
    let cell = byK.get(k);
    if (!cell) byK.set(k, (cell = { mean: [], p5: [], p95: [] }));
    cell.mean.push(num(row, "mean_ratio"));
    cell.p5.push(num(row, "p5"));
    cell.p95.push(num(row, "p95"));
  }

  const ks: number[] = [];
  let lo = Infinity;
  let hi = -Infinity;
  for (const byK of perMethod.values()) {
    for (const [k, cell] of byK) {
      if (!ks.includes(k)) ks.push(k);
      lo = Math.min(lo, mean(cell.p5));
      hi = Math.max(hi, mean(cell.p95));
    }
  }
  ks.sort((a, b) => a - b);
  const pad = (hi - lo) * 0.08;
  const xs = svg.linearScale(ks[0], ks[ks.length - 1], svg.MARGIN.left, svg.WIDTH - svg.MARGIN.right);
  const ys = svg.linearScale(lo - pad, hi + pad, svg.HEIGHT - svg.MARGIN.bottom, svg.MARGIN.top);

  const parts: string[] = [];
  let meanOfMeans = 0;
  let nCells = 0;
  for (const m of methods) {
    const byK = perMethod.get(m)!;
    const kSorted = [...byK.keys()].sort((a, b) => a - b);
    const upper: Array<[number, number]> = kSorted.map((k) => [xs(k), ys(mean(byK.get(k)!.p95))]);
    const lower: Array<[number, number]> = kSorted
      .slice()
      .reverse()
      .map((k) => [xs(k), ys(mean(byK.get(k)!.p5))]);
    if (kSorted.length > 1) {
      parts.push(svg.polygon([...upper, ...lower], `fill="${svg.colorFor(m)}" fill-opacity="0.15" stroke="none"`));
    }
    const line: Array<[number, number]> = kSorted.map((k) => [xs(k), ys(mean(byK.get(k)!.mean))]);
    parts.push(svg.polyline(line, `fill="none" stroke="${svg.colorFor(m)}" stroke-width="2" class="mean-${m}"`));
    for (const [x, y] of line) parts.push(svg.circle(x, y, 2.5, `fill="${svg.colorFor(m)}"`));
    for (const k of kSorted) {
      meanOfMeans += mean(byK.get(k)!.mean);
      nCells += 1;
    }
  }
  parts.push(
    svg.frame(xs, ys, {
      x: "projection dimension k",
      y: "norm ratio",
      title: opts.title ?? "mean and 5th-95th percentile of norm ratios",
    }),
  );
  parts.push(svg.legend(methods));
  return {
    svg: svg.document(parts.join("\n")),
    summary: {
      kind: "band",
      methods: methods.join(" "),
      n_points: nCells,
      grand_mean_ratio: meanOfMeans / nCells,
    },
  };
}

/** Ratio histogram with a moment-matched normal density overlay. */
export function renderHistogram(table: CsvTable, opts: PlotOptions = {}): RenderResult {
  requireColumns(table, ["method", "ratio"]);
  const methods = selectMethods(table.rows, opts.methods);
  const ratios = table.rows.filter((r) => methods.includes(r.method)).map((r) => num(r, "ratio"));
  if (ratios.length === 0) throw new Error("no ratios selected");
  const bins = opts.bins ?? 30;
  const h = histogram(ratios, bins);
  const mu = mean(ratios);
  const sigma = sampleStd(ratios);
  const width = h.edges[1] - h.edges[0];
  const densities = h.counts.map((c) => c / (ratios.length * width));
  let peak = Math.max(...densities);
  if (sigma > 0) peak = Math.max(peak, normalPdf(mu, mu, sigma));

  const xs = svg.linearScale(h.edges[0], h.edges[bins], svg.MARGIN.left, svg.WIDTH - svg.MARGIN.right);
  const ys = svg.linearScale(0, peak * 1.08, svg.HEIGHT - svg.MARGIN.bottom, svg.MARGIN.top);
  const parts: string[] = [];
  h.counts.forEach((c, i) => {
    const x0 = xs(h.edges[i]);
    const x1 = xs(h.edges[i + 1]);
    const y = ys(densities[i]);
    parts.push(
      svg.rect(x0, y, x1 - x0, svg.HEIGHT - svg.MARGIN.bottom - y, `fill="#1f77b4" fill-opacity="0.6" stroke="white" class="bin" data-count="${c}"`),
    );
  });
  if (sigma > 0) {
    const curve: Array<[number, number]> = [];
    for (let i = 0; i <= 160; i++) {
      const v = h.edges[0] + ((h.edges[bins] - h.edges[0]) * i) / 160;
      curve.push([xs(v), ys(normalPdf(v, mu, sigma))]);
    }
    parts.push(svg.polyline(curve, 'fill="none" stroke="#d62728" stroke-width="2"'));
  }
  parts.push(
    svg.frame(xs, ys, {
      x: "norm ratio",
      y: "density",
      title: opts.title ?? `ratio histogram, n=${ratios.length}`,
    }),
  );
  return {
    svg: svg.document(parts.join("\n")),
    summary: {
      kind: "histogram",
      methods: methods.join(" "),
      n_ratios: ratios.length,
      count_sum: h.counts.reduce((a, b) => a + b, 0),
      mean: mu,
      std: sigma,
      bins,
    },
  };
}

/** Build + apply wall time vs k on a log axis, one line per method. */
export function renderRuntime(table: CsvTable, opts: PlotOptions = {}): RenderResult {
  requireColumns(table, ["method", "k", "build_ns", "apply_ns"]);
  const methods = selectMethods(table.rows, opts.methods);
  const perMethod = new Map<string, Array<[number, number]>>();
  let lo = Infinity;
  let hi = -Infinity;
  let kLo = Infinity;
  let kHi = -Infinity;
  for (const row of table.rows) {
    if (!methods.includes(row.method)) continue;
    const k = num(row, "k");
    const total = num(row, "build_ns") + num(row, "apply_ns");
    if (total <= 0) throw new Error("non-positive timing value");
    if (!perMethod.has(row.method)) perMethod.set(row.method, []);
    perMethod.get(row.method)!.push([k, total]);
    lo = Math.min(lo, total);
    hi = Math.max(hi, total);
    kLo = Math.min(kLo, k);
    kHi = Math.max(kHi, k);
  }
  const xs = svg.linearScale(kLo, kHi, svg.MARGIN.left, svg.WIDTH - svg.MARGIN.right);
  const ys = svg.logScale(lo / 1.5, hi * 1.5, svg.HEIGHT - svg.MARGIN.bottom, svg.MARGIN.top);
  const parts: string[] = [];
  let total = 0;
  let n = 0;
  for (const m of methods) {
    const pts = perMethod
      .get(m)!
      .sort((a, b) => a[0] - b[0])
      .map(([k, t]): [number, number] => [xs(k), ys(t)]);
    parts.push(svg.polyline(pts, `fill="none" stroke="${svg.colorFor(m)}" stroke-width="2"`));
    for (const [x, y] of pts) parts.push(svg.circle(x, y, 2.5, `fill="${svg.colorFor(m)}"`));
    for (const [, t] of perMethod.get(m)!) {
      total += t;
      n += 1;
    }
  }
  parts.push(
    svg.frame(
      xs,
      ys,
      {
        x: "projection dimension k",
        y: "build + apply time (ns)",
        title: opts.title ?? "runtime vs projection dimension",
      },
      undefined,
      (t) => `1e${Math.round(Math.log10(t))}`,
    ),
  );
  parts.push(svg.legend(methods));
  return {
    svg: svg.document(parts.join("\n")),
    summary: {
      kind: "runtime",
      methods: methods.join(" "),
      n_points: n,
      mean_total_ns: total / n,
    },
  };
}

export function render(kind: PlotKind, table: CsvTable, opts: PlotOptions = {}): RenderResult {
  switch (kind) {
    case "band":
      return renderBand(table, opts);
    case "histogram":
      return renderHistogram(table, opts);
    case "runtime":
      return renderRuntime(table, opts);
    default:
      throw new Error(`unknown plot kind '${kind as string}'`);
  }
}
