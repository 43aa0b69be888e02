import { readFileSync } from "node:fs";
import Papa from "papaparse";

export type Cell = string | number | boolean | null;
export type Row = Record<string, Cell>;

export interface Table {
  schema: string;
  path: string;
  rows: Row[];
}

export class CsvError extends Error {}

/**
 * Column layouts written by the simulation CLI. A file is accepted only if
 * its header matches one of these exactly, including column order.
 */
export const SCHEMAS: Record<string, readonly string[]> = {
  pite_sweep: [
    "seed", "n", "K", "mode", "trotter_order", "r", "gamma", "shift",
    "P_K", "delta_K", "depth_measured", "depth_formula",
  ],
  qpe_sweep: [
    "seed", "n", "K", "mode", "trotter_order", "r", "t0", "k_selected",
    "P_k", "delta", "depth_formula",
  ],
  qaa_sweep: [
    "seed", "n", "K", "c1_abs", "P_before", "m_star", "m_used", "P_after",
    "delta_post", "depth_formula",
  ],
  weight_sweep: ["seed", "n", "K", "method", "sigma", "c1_abs", "P", "delta"],
  cost: [
    "method", "c1_abs", "delta_target", "K_needed", "depth_total",
    "expected_repetitions", "cost",
  ],
};

function matchSchema(header: readonly string[]): string | null {
  for (const [name, cols] of Object.entries(SCHEMAS)) {
    if (cols.length === header.length && cols.every((c, i) => c === header[i])) {
      return name;
    }
  }
  return null;
}

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new CsvError(`cannot read ${path}`);
  }
  if (text.trim() === "") {
    throw new CsvError(`no data in ${path}: file is empty`);
  }
  const parsed = Papa.parse<Row>(text, {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  const header = parsed.meta.fields ?? [];
  const schema = matchSchema(header);
  if (schema === null) {
    throw new CsvError(
      `${path}: header [${header.join(",")}] matches no documented schema ` +
      `(expected one of: ${Object.keys(SCHEMAS).join(", ")})`,
    );
  }
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new CsvError(`${path}: malformed CSV at row ${e.row}: ${e.message}`);
  }
  if (parsed.data.length === 0) {
    throw new CsvError(`no data in ${path}: header only`);
  }
  return { schema, path, rows: parsed.data };
}

/** Numeric field access; anything non-finite in a plotted column is a data error. */
export function num(row: Row, col: string): number {
  const v = row[col];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new CsvError(`expected a finite number in column ${col}, got ${String(v)}`);
  }
  return v;
}

export function str(row: Row, col: string): string {
  return String(row[col]);
}
