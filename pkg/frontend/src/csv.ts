/**
 * CSV reading for the plotting pipeline.
 *
 * The upstream tool writes RFC-4180-style files with a header row and plain
 * numeric cells (no quoting, '.' decimal separator), so parsing is a
 * line/comma split.  Schema validation is strict: a missing column aborts
 * with a message naming it.
 */

export interface Table {
  columns: string[];
  /** rows[i][j] is the numeric value of columns[j] in data row i */
  rows: number[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r\n|\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header row");
  }
  const columns = lines[0].split(",");
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row ${i} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    rows.push(cells.map(Number));
  }
  return { columns, rows };
}

/** Assert every required column exists; report all the missing ones. */
export function requireColumns(table: Table, required: string[]): void {
  const missing = required.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `missing column(s): ${missing.join(", ")} (found: ${table.columns.join(", ")})`,
    );
  }
}

/** Values of one column, in row order. */
export function column(table: Table, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`missing column(s): ${name}`);
  }
  return table.rows.map((row) => row[idx]);
}
