import { readFileSync, writeFileSync } from "node:fs";

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FIGURE_KINDS, RenderError, renderSvg } from "./render.js";
import { SchemaError, parseResultsCsv } from "./schema.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command("render", "render a result CSV to an SVG figure", (y) =>
      y
        .option("kind", {
          type: "string",
          demandOption: true,
          choices: Object.keys(FIGURE_KINDS),
          describe: "figure kind",
        })
        .option("in", {
          type: "string",
          demandOption: true,
          describe: "input CSV path",
        })
        .option("out", {
          type: "string",
          demandOption: true,
          describe: "output SVG path",
        })
        .option("width", { type: "number", default: 900 })
        .option("height", { type: "number", default: 600 }),
    )
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .parseSync();

  const opts = args as unknown as {
    kind: string;
    in: string;
    out: string;
    width: number;
    height: number;
  };
  try {
    const rows = parseResultsCsv(readFileSync(opts.in, "utf8"));
    const svg = renderSvg(opts.kind, rows, opts.width, opts.height);
    writeFileSync(opts.out, svg);
    console.log(`wrote ${opts.out} (${rows.length} rows)`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof RenderError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}
