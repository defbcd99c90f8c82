import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { FIGURE_KINDS, RenderError, buildChartOption, renderSvg } from "../src/render.js";
import { SchemaError, parseResultsCsv } from "../src/schema.js";

const FIXTURES = join(__dirname, "fixtures");

function load(kind: string) {
  return parseResultsCsv(readFileSync(join(FIXTURES, `${kind}.csv`), "utf8"));
}

describe("schema", () => {
  it("parses a valid result table", () => {
    const rows = load("fig8");
    expect(rows.length).toBe(27);
    expect(rows[0].scenario).toBe("fig8");
    expect(typeof rows[0].value).toBe("number");
  });

  it("rejects a wrong header", () => {
    expect(() => parseResultsCsv("a,b,c\n1,2,3")).toThrow(SchemaError);
  });

  it("rejects non-numeric values", () => {
    const text =
      "scenario,sweep_var,sweep_value,metric,value,ci_low,ci_high,trials,seed\n" +
      "s,x,1,m,not-a-number,,,,";
    expect(() => parseResultsCsv(text)).toThrow(SchemaError);
  });
});

describe("figure rendering", () => {
  // every built-in scenario's CSV renders to a non-empty SVG
  const kinds = readdirSync(FIXTURES)
    .filter((f) => f.endsWith(".csv"))
    .map((f) => f.replace(/\.csv$/, ""));

  it("has a fixture for every figure kind family", () => {
    expect(kinds).toEqual(
      expect.arrayContaining(["fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7", "fig8"]),
    );
  });

  for (const kind of kinds) {
    it(`renders ${kind}`, () => {
      const svg = renderSvg(kind, load(kind));
      expect(svg).toContain("<svg");
      expect(svg).toContain("</svg>");
      expect(svg.length).toBeGreaterThan(1000);
    });
  }

  it("builds one series per metric", () => {
    const rows = load("fig8");
    const option = buildChartOption("fig8", rows);
    const series = option.series as unknown[];
    expect(series.length).toBe(3); // gossip, broadcast, sizing term
  });

  it("uses a log axis for the outage figure", () => {
    const option = buildChartOption("fig4", load("fig4"));
    expect((option.yAxis as { type: string }).type).toBe("log");
  });

  it("rejects unknown kinds and empty tables", () => {
    expect(() => buildChartOption("fig99", load("fig8"))).toThrow(RenderError);
    expect(() => buildChartOption("fig8", [])).toThrow(RenderError);
  });
});
