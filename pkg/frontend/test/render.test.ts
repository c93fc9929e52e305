import { existsSync, mkdtempSync, readFileSync, statSync } from 'fs';
import { tmpdir } from 'os';
import { join } from 'path';
import { describe, expect, it } from 'vitest';

import { normalizeFigureSpec } from '../src/figure';
import { renderFigure } from '../src/render';

const FIXTURES = join(__dirname, 'fixtures');

function renderFixture(name: string, extra: Record<string, unknown> = {}) {
  const dir = mkdtempSync(join(tmpdir(), 'pinchsec-plot-'));
  const out = join(dir, `${name}.svg`);
  const spec = normalizeFigureSpec({
    input_csv: join(FIXTURES, name),
    output: out,
    title: 'secrecy rate sweep',
    ...extra,
  });
  renderFigure(spec);
  return out;
}

describe('renderFigure', () => {
  it('renders the golden sweep CSV to a non-empty SVG', () => {
    const out = renderFixture('golden_results.csv');
    expect(existsSync(out)).toBe(true);
    expect(statSync(out).size).toBeGreaterThan(0);
    const svg = readFileSync(out, 'utf-8');
    expect(svg).toContain('<svg');
    for (const tag of ['past', 'pso-single', 'random', 'conventional']) {
      expect(svg).toContain(tag); // legend entries, one per method
    }
  });

  it('renders a CSV with an all-infeasible cell (line gap)', () => {
    const out = renderFixture('gap_results.csv');
    const svg = readFileSync(out, 'utf-8');
    expect(svg).toContain('<svg');
    expect(svg).toContain('wd');
  });

  it('renders a single-method CSV to a single-line plot', () => {
    const dir = mkdtempSync(join(tmpdir(), 'pinchsec-plot-'));
    const csv = join(dir, 'one.csv');
    require('fs').writeFileSync(
      csv,
      'method,sweep_value,trial,seed,feasible,sr,rate_bob,rate_eve\n' +
        'past,2,0,1,true,1.5,2,0.5\npast,4,0,1,true,2.5,3,0.5\n',
    );
    const out = join(dir, 'one.svg');
    renderFigure(normalizeFigureSpec({ input_csv: csv, output: out }));
    expect(readFileSync(out, 'utf-8')).toContain('past');
  });

  it('fails with the offending column name on schema mismatch', () => {
    const dir = mkdtempSync(join(tmpdir(), 'pinchsec-plot-'));
    const csv = join(dir, 'bad.csv');
    require('fs').writeFileSync(csv, 'method,sr\npast,1.0\n');
    const spec = normalizeFigureSpec({
      input_csv: csv,
      output: join(dir, 'bad.svg'),
    });
    expect(() => renderFigure(spec)).toThrowError(/sweep_value/);
  });
});
