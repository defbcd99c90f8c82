import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");

describe("cli", () => {
  it("renders a fixture to SVG and exits 0", () => {
    const dir = mkdtempSync(join(tmpdir(), "figures-"));
    const out = join(dir, "fig8.svg");
    const code = main(["render", "--kind", "fig8", "--in", join(FIXTURES, "fig8.csv"), "--out", out]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf8")).toContain("<svg");
  });

  it("exits nonzero on schema mismatch", () => {
    const dir = mkdtempSync(join(tmpdir(), "figures-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "wrong,header\n1,2\n");
    const code = main(["render", "--kind", "fig8", "--in", bad, "--out", join(dir, "x.svg")]);
    expect(code).toBe(1);
  });

  it("exits nonzero on a missing input file", () => {
    const dir = mkdtempSync(join(tmpdir(), "figures-"));
    const code = main([
      "render", "--kind", "fig8", "--in", join(dir, "nope.csv"), "--out", join(dir, "x.svg"),
    ]);
    expect(code).toBe(1);
  });
});
