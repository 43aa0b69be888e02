#!/usr/bin/env node
import { pathToFileURL } from "node:url";
import yargs from "yargs";
import { FigureError, FigureKind, FigureSpec, render } from "./figures.js";
import { CsvError } from "./schema.js";

export async function runCli(argv: string[]): Promise<number> {
  const parser = yargs(argv)
    .scriptName("figs")
    .usage("$0 --kind <figure> --in <csv...> --out <image.svg>")
    .option("kind", {
      choices: ["steps", "depth", "cost", "weight"] as const,
      demandOption: true,
      describe: "figure family to render",
    })
    .option("in", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "input CSV files (sweep outputs of the simulation CLI)",
    })
    .option("out", {
      type: "string",
      demandOption: true,
      describe: "output SVG path",
    })
    .option("x-scale", { choices: ["linear", "log"] as const, describe: "override x axis scale" })
    .option("y-scale", { choices: ["linear", "log"] as const, describe: "override y axis scale" })
    .option("guides", {
      type: "number",
      array: true,
      describe: "slope-guide exponents in |c1| for the cost figure",
    })
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new Error(msg);
    });

  let args;
  try {
    args = await parser.parse();
  } catch (e) {
    console.error(e instanceof Error ? e.message : String(e));
    return 2;
  }

  const spec: FigureSpec = {
    kind: args.kind as FigureKind,
    inputs: args.in,
    output: args.out,
    xScale: args.xScale,
    yScale: args.yScale,
    guideExponents: args.guides,
  };
  try {
    const result = render(spec);
    console.log(JSON.stringify({ kind: spec.kind, out: result.output, rows: result.rows }));
    return 0;
  } catch (e) {
    if (e instanceof CsvError || e instanceof FigureError) {
      console.error(e.message);
      return 2;
    }
    throw e;
  }
}

const entry = process.argv[1] ? pathToFileURL(process.argv[1]).href : "";
if (import.meta.url === entry) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
