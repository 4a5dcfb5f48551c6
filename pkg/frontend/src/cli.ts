import { readFileSync, writeFileSync } from "node:fs";

import { parseCsv } from "./csv.js";
import { PlotKind, render } from "./plots.js";

const USAGE = `usage: plot --kind {band,histogram,runtime} --input data.csv --out figure.svg
            [--methods rs,rp,srp] [--bins N] [--title TEXT]

band       mean line + shaded 5th-95th percentile region vs k
           (input: the aggregate sweep CSV)
histogram  ratio histogram with fitted normal overlay
           (input: the per-pair raw ratio CSV)
runtime    build+apply wall time vs k, log scale
           (input: the benchmark CSV)`;

interface Args {
  kind: PlotKind;
  input: string;
  out: string;
  methods?: string[];
  bins?: number;
  title?: string;
}

export function parseArgs(argv: string[]): Args {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--")) throw new Error(`expected a flag, got '${key}'`);
    if (key === "--help") throw new Error(USAGE);
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`flag ${key} needs a value`);
    flags.set(key.slice(2), value);
  }
  const known = new Set(["kind", "input", "out", "methods", "bins", "title"]);
  for (const key of flags.keys()) {
    if (!known.has(key)) throw new Error(`unknown flag --${key}\n${USAGE}`);
  }
  const kind = flags.get("kind");
  const input = flags.get("input");
  const out = flags.get("out");
  if (!kind || !input || !out) throw new Error(`--kind, --input and --out are required\n${USAGE}`);
  if (kind !== "band" && kind !== "histogram" && kind !== "runtime") {
    throw new Error(`unknown kind '${kind}'`);
  }
  const args: Args = { kind, input, out };
  const methods = flags.get("methods");
  if (methods) args.methods = methods.split(",").filter((m) => m.length > 0);
  const bins = flags.get("bins");
  if (bins) {
    args.bins = Number(bins);
    if (!Number.isInteger(args.bins) || args.bins < 1) throw new Error("--bins must be a positive integer");
  }
  const title = flags.get("title");
  if (title) args.title = title;
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  try {
    const table = parseCsv(readFileSync(args.input, "utf-8"));
    const result = render(args.kind, table, {
      methods: args.methods,
      bins: args.bins,
      title: args.title,
    });
    writeFileSync(args.out, result.svg);
    for (const [key, value] of Object.entries(result.summary)) {
      console.log(`${key}=${value}`);
    }
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
