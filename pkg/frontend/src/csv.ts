export interface CsvTable {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const fields = line.split(",");
    if (fields.length !== columns.length) {
      throw new Error(`line ${i + 2}: expected ${columns.length} fields, got ${fields.length}`);
    }
    const rec: Record<string, string> = {};
    columns.forEach((c, j) => (rec[c] = fields[j]));
    return rec;
  });
  return { columns, rows };
}

export function requireColumns(table: CsvTable, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new Error(`missing column '${name}' (have: ${table.columns.join(", ")})`);
    }
  }
}

export function num(row: Record<string, string>, column: string): number {
  const v = Number(row[column]);
  if (!Number.isFinite(v)) {
    throw new Error(`non-numeric value '${row[column]}' in column '${column}'`);
  }
  return v;
}
