#!/usr/bin/env node
/** CLI: pinchsec-plot --spec <figure.json> */

import { loadFigureSpec } from './figure';
import { renderFigure } from './render';

export function main(argv: string[]): number {
  const idx = argv.indexOf('--spec');
  if (idx < 0 || idx + 1 >= argv.length) {
    process.stderr.write('usage: pinchsec-plot --spec <figure.json>\n');
    return 2;
  }
  try {
    const out = renderFigure(loadFigureSpec(argv[idx + 1]));
    process.stdout.write(`wrote ${out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 2;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
