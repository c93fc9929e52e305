/** Minimal reader for the sweep CSV contract: UTF-8, comma-separated,
 *  "\n" line endings, mandatory header row, no quoting. */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): CsvTable {
  const lines = text.split('\n').filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError('empty CSV: missing header row');
  }
  const header = lines[0].split(',');
  const rows = lines.slice(1).map((line, i) => {
    const fields = line.split(',');
    if (fields.length !== header.length) {
      throw new SchemaError(
        `row ${i + 1} has ${fields.length} fields, header has ${header.length}`,
      );
    }
    return fields;
  });
  return { header, rows };
}

/** Index of a required column, by name. */
export function columnIndex(table: CsvTable, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(`missing column "${name}" (header: ${table.header.join(',')})`);
  }
  return idx;
}
