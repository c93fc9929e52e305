/** Figure description: which CSV, which columns, how to aggregate. */

import { readFileSync } from 'fs';

export type Aggregate = 'median' | 'mean';

export interface FigureSpec {
  input_csv: string;
  output: string;
  x_field: string;
  series_field: string;
  aggregate: Aggregate;
  title?: string;
  x_label?: string;
  y_label?: string;
  width?: number;
  height?: number;
}

const DEFAULTS = {
  x_field: 'sweep_value',
  series_field: 'method',
  aggregate: 'median' as Aggregate,
};

export function loadFigureSpec(path: string): FigureSpec {
  const raw = JSON.parse(readFileSync(path, 'utf-8'));
  return normalizeFigureSpec(raw);
}

export function normalizeFigureSpec(raw: Record<string, unknown>): FigureSpec {
  for (const key of ['input_csv', 'output']) {
    if (typeof raw[key] !== 'string' || raw[key] === '') {
      throw new Error(`figure spec needs a non-empty "${key}"`);
    }
  }
  const spec = { ...DEFAULTS, ...raw } as FigureSpec;
  if (spec.aggregate !== 'median' && spec.aggregate !== 'mean') {
    throw new Error(`aggregate must be "median" or "mean", got "${spec.aggregate}"`);
  }
  return spec;
}
