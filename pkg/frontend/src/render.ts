import * as echarts from "echarts";
import type { EChartsOption, SeriesOption } from "echarts";

import { ResultRow } from "./schema.js";

export interface FigureKind {
  title: string;
  xLabel: string;
  yLabel: string;
  logY?: boolean;
  /** metrics whose name starts with one of these render as scatter points */
  scatterPrefixes?: string[];
}

export const FIGURE_KINDS: Record<string, FigureKind> = {
  fig3: {
    title: "Resiliency probability vs representative count",
    xLabel: "representatives",
    yLabel: "Pr[resilient]",
    scatterPrefixes: ["resiliency_mc"],
  },
  fig4: {
    title: "Distortion outage vs representative count",
    xLabel: "representatives",
    yLabel: "Pr[|distortion| > beta]",
    logY: true,
    scatterPrefixes: ["outage_mc"],
  },
  fig5: {
    title: "Consensus latency vs resiliency target",
    xLabel: "alpha",
    yLabel: "latency (slots)",
  },
  fig6a: {
    title: "Consensus latency vs distortion bound",
    xLabel: "beta (slots)",
    yLabel: "latency (slots)",
  },
  fig6b: {
    title: "Consensus latency vs robustness target",
    xLabel: "gamma",
    yLabel: "latency (slots)",
  },
  fig7: {
    title: "Latency and normalized energy vs faulty nodes",
    xLabel: "faulty nodes",
    yLabel: "value",
    scatterPrefixes: ["latency_mc", "energy_norm"],
  },
  "fig7-text": {
    title: "Latency and normalized energy vs faulty nodes (loose targets)",
    xLabel: "faulty nodes",
    yLabel: "value",
    scatterPrefixes: ["latency_mc", "energy_norm"],
  },
  fig7a: {
    title: "Consensus latency vs faulty nodes",
    xLabel: "faulty nodes",
    yLabel: "latency (slots)",
    scatterPrefixes: ["latency_mc"],
  },
  fig7b: {
    title: "Normalized energy vs faulty nodes",
    xLabel: "faulty nodes",
    yLabel: "energy / full-referendum gossip",
    scatterPrefixes: ["energy_norm"],
  },
  fig8: {
    title: "Required validators vs network size (fixed area)",
    xLabel: "network size N",
    yLabel: "required validators",
  },
};

export class RenderError extends Error {}

function groupByMetric(rows: ResultRow[]): Map<string, ResultRow[]> {
  const groups = new Map<string, ResultRow[]>();
  for (const row of rows) {
    const list = groups.get(row.metric) ?? [];
    list.push(row);
    groups.set(row.metric, list);
  }
  return groups;
}

/** Build the chart option for a figure kind from validated rows. */
export function buildChartOption(kind: string, rows: ResultRow[]): EChartsOption {
  const spec = FIGURE_KINDS[kind];
  if (!spec) {
    throw new RenderError(
      `unknown figure kind "${kind}" (known: ${Object.keys(FIGURE_KINDS).join(", ")})`,
    );
  }
  if (rows.length === 0) {
    throw new RenderError("no data rows to render");
  }
  const groups = groupByMetric(rows);
  const series: SeriesOption[] = [];
  for (const [metric, points] of groups) {
    const data = points
      .filter((p) => p.sweep_value !== null)
      // a log axis cannot show exact zeros (e.g. empirical outage rates of 0)
      .filter((p) => !spec.logY || p.value > 0)
      .sort((a, b) => (a.sweep_value as number) - (b.sweep_value as number))
      .map((p) => [p.sweep_value as number, p.value]);
    if (data.length === 0) {
      console.warn(`metric ${metric} has no sweep values; skipped`);
      continue;
    }
    const scatter = (spec.scatterPrefixes ?? []).some((p) => metric.startsWith(p));
    series.push({
      name: metric,
      type: scatter ? "scatter" : "line",
      symbolSize: scatter ? 7 : 4,
      data,
    });
  }
  if (series.length === 0) {
    throw new RenderError("no plottable series (all rows lack sweep values)");
  }
  return {
    animation: false,
    title: { text: spec.title, left: "center" },
    legend: { bottom: 0, type: "scroll" },
    grid: { left: 70, right: 30, top: 50, bottom: 80 },
    xAxis: { type: "value", name: spec.xLabel, nameLocation: "middle", nameGap: 28 },
    yAxis: {
      type: spec.logY ? "log" : "value",
      name: spec.yLabel,
      nameLocation: "middle",
      nameGap: 50,
    },
    series,
  };
}

/** Render rows for a figure kind to a standalone SVG string. */
export function renderSvg(
  kind: string,
  rows: ResultRow[],
  width = 900,
  height = 600,
): string {
  const option = buildChartOption(kind, rows);
  const chart = echarts.init(null, null, { renderer: "svg", ssr: true, width, height });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
