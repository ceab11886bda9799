import Papa from "papaparse";

/** One row of a sweep CSV. */
export interface SweepRow {
  p: number;
  trials: number;
  failures: number;
  rate: number;
  ci_low: number;
  ci_high: number;
}

export const SWEEP_COLUMNS = [
  "p",
  "trials",
  "failures",
  "rate",
  "ci_low",
  "ci_high",
] as const;

export class CsvError extends Error {}

/**
 * Parse a sweep CSV, enforcing the exact column schema.  A header that is
 * missing a column, or carries an extra one, is reported by column name;
 * a file without data rows is an error (nothing should be plotted from it).
 */
export function parseSweepCsv(text: string, source: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const col of SWEEP_COLUMNS) {
    if (!fields.includes(col)) {
      throw new CsvError(`${source}: missing column "${col}"`);
    }
  }
  for (const col of fields) {
    if (!(SWEEP_COLUMNS as readonly string[]).includes(col)) {
      throw new CsvError(`${source}: unexpected column "${col}"`);
    }
  }
  if (parsed.data.length === 0) {
    throw new CsvError(`${source}: no data rows`);
  }
  return parsed.data.map((row, i) => {
    const get = (col: string): number => {
      const value = Number(row[col]);
      if (!Number.isFinite(value)) {
        throw new CsvError(
          `${source}: row ${i + 2}: column "${col}" is not numeric (${row[col]})`,
        );
      }
      return value;
    };
    return {
      p: get("p"),
      trials: get("trials"),
      failures: get("failures"),
      rate: get("rate"),
      ci_low: get("ci_low"),
      ci_high: get("ci_high"),
    };
  });
}
