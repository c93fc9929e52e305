/** Server-side SVG rendering of one figure from a sweep results CSV. */

import { readFileSync, writeFileSync } from 'fs';
import * as echarts from 'echarts';

import { extractSeries, SeriesPoint } from './aggregate';
import { parseCsv } from './csv';
import { FigureSpec } from './figure';

export function buildOption(
  series: Map<string, SeriesPoint[]>,
  spec: FigureSpec,
): echarts.EChartsOption {
  return {
    animation: false,
    title: spec.title ? { text: spec.title, left: 'center' } : undefined,
    legend: { data: [...series.keys()], bottom: 0 },
    grid: { left: 60, right: 20, top: spec.title ? 50 : 20, bottom: 60 },
    xAxis: {
      type: 'value',
      name: spec.x_label ?? spec.x_field,
      nameLocation: 'middle',
      nameGap: 28,
      scale: true,
    },
    yAxis: {
      type: 'value',
      name: spec.y_label ?? `${spec.aggregate} sr`,
      nameLocation: 'middle',
      nameGap: 42,
      scale: true,
    },
    series: [...series.entries()].map(([tag, points]) => ({
      name: tag,
      type: 'line' as const,
      symbol: 'circle',
      symbolSize: 6,
      connectNulls: false, // empty cells stay visible as gaps
      data: points.map((p) => [p.x, p.value] as [number, number | null]),
    })),
  };
}

export function renderSvg(
  series: Map<string, SeriesPoint[]>,
  spec: FigureSpec,
): string {
  const chart = echarts.init(null, null, {
    renderer: 'svg',
    ssr: true,
    width: spec.width ?? 800,
    height: spec.height ?? 520,
  });
  chart.setOption(buildOption(series, spec));
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

/** Read the CSV, aggregate, render, and write the SVG named in the spec. */
export function renderFigure(spec: FigureSpec): string {
  const table = parseCsv(readFileSync(spec.input_csv, 'utf-8'));
  const series = extractSeries(table, spec);
  const svg = renderSvg(series, spec);
  writeFileSync(spec.output, svg, 'utf-8');
  return spec.output;
}
