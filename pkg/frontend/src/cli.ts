#!/usr/bin/env node
/**
 * plot <kind> --in <csv> [--in <csv>]... --out <img> [--x-scale s] [--y-scale s]
 *
 * kinds: histogram | peak_time_vs_d | peak_amp_vs_d
 * Writes an SVG; exits nonzero with a column-name diagnostic when an input
 * does not match the expected schema for the chosen kind.
 */

import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { SchemaError } from "./csv.js";
import { REQUIRED_COLUMNS, renderFigure, type FigureKind, type FigureSpec } from "./figures.js";
import type { ScaleKind } from "./svg.js";

const KINDS = Object.keys(REQUIRED_COLUMNS) as FigureKind[];

export function parseArgs(argv: string[]): FigureSpec {
  if (argv.length === 0) {
    throw new Error(`usage: plot <kind> --in <csv> [--in <csv>]... --out <img>`);
  }
  const kind = argv[0] as FigureKind;
  if (!KINDS.includes(kind)) {
    throw new Error(`unknown kind '${argv[0]}' (expected one of: ${KINDS.join(", ")})`);
  }
  const inputs: string[] = [];
  let output: string | undefined;
  let xScale: ScaleKind | undefined;
  let yScale: ScaleKind | undefined;
  for (let i = 1; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[++i];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    switch (flag) {
      case "--in":
        inputs.push(value);
        break;
      case "--out":
        output = value;
        break;
      case "--x-scale":
      case "--y-scale": {
        if (value !== "linear" && value !== "log") {
          throw new Error(`${flag} must be 'linear' or 'log', got '${value}'`);
        }
        if (flag === "--x-scale") xScale = value;
        else yScale = value;
        break;
      }
      default:
        throw new Error(`unknown flag '${flag}'`);
    }
  }
  if (inputs.length === 0) throw new Error("at least one --in CSV is required");
  if (!output) throw new Error("--out is required");
  return { kind, inputs, output, xScale, yScale };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const svg = renderFigure(spec);
    writeFileSync(spec.output, svg, "utf8");
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
