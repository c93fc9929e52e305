/** Per-(series, x) aggregation of secrecy rates over feasible rows. */

import { columnIndex, CsvTable } from './csv';
import { Aggregate, FigureSpec } from './figure';

export interface SeriesPoint {
  x: number;
  value: number | null; // null: no feasible rows at this cell (plot gap)
  count: number;        // feasible rows aggregated
}

export function median(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const mid = sorted.length >> 1;
  return sorted.length % 2 === 1
    ? sorted[mid]
    : (sorted[mid - 1] + sorted[mid]) / 2;
}

export function mean(values: number[]): number {
  return values.reduce((acc, v) => acc + v, 0) / values.length;
}

function aggregator(kind: Aggregate): (values: number[]) => number {
  return kind === 'median' ? median : mean;
}

/** One line per series tag, x ascending, aggregated over feasible rows. */
export function extractSeries(
  table: CsvTable,
  spec: FigureSpec,
): Map<string, SeriesPoint[]> {
  const xIdx = columnIndex(table, spec.x_field);
  const seriesIdx = columnIndex(table, spec.series_field);
  const srIdx = columnIndex(table, 'sr');
  const feasibleIdx = columnIndex(table, 'feasible');

  const cells = new Map<string, Map<number, number[]>>();
  for (const row of table.rows) {
    const tag = row[seriesIdx];
    const x = Number(row[xIdx]);
    if (!cells.has(tag)) {
      cells.set(tag, new Map());
    }
    const byX = cells.get(tag)!;
    if (!byX.has(x)) {
      byX.set(x, []);
    }
    if (row[feasibleIdx] === 'true' && row[srIdx] !== '') {
      byX.get(x)!.push(Number(row[srIdx]));
    }
  }

  const agg = aggregator(spec.aggregate);
  const out = new Map<string, SeriesPoint[]>();
  for (const [tag, byX] of cells) {
    const points = [...byX.entries()]
      .sort(([a], [b]) => a - b)
      .map(([x, values]) => ({
        x,
        value: values.length ? agg(values) : null,
        count: values.length,
      }));
    out.set(tag, points);
  }
  return out;
}
