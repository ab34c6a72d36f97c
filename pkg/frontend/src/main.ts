#!/usr/bin/env node
/**
 * plots — render a 16-panel transition figure from a trajectory CSV.
 *
 * Usage:
 *   plots <trajectory.csv> [--figure fig7] [--out figure.svg]
 *         [--z-ref 100] [--speed-ref 100] [--t1 5]
 *         [--direction hover_to_level|level_to_hover]
 *         [--title "Mode transition"] [--format svg]
 */

import { readFileSync, writeFileSync } from "node:fs";
import process from "node:process";

import { CsvError, parseTrajectory } from "./csv.js";
import { renderTransitionFigure } from "./figure.js";
import type { FigureOptions } from "./layout.js";

interface CliArgs {
  csv: string;
  figure: string;
  out: string;
  format: string;
  title: string;
  options: FigureOptions;
}

export function parseArgs(argv: string[]): CliArgs {
  const positional: string[] = [];
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg.startsWith("--")) {
      const value = argv[i + 1];
      if (value === undefined) throw new Error(`missing value for ${arg}`);
      flags.set(arg.slice(2), value);
      i++;
    } else {
      positional.push(arg);
    }
  }
  if (positional.length !== 1) {
    throw new Error("usage: plots <trajectory.csv> [--figure fig7] [--out out.svg]");
  }
  const direction = (flags.get("direction") ?? "hover_to_level") as
    FigureOptions["direction"];
  if (direction !== "hover_to_level" && direction !== "level_to_hover") {
    throw new Error(`unknown direction '${direction}'`);
  }
  const figure = flags.get("figure") ?? "fig7";
  if (figure !== "fig7" && figure !== "fig8") {
    throw new Error(`unknown figure '${figure}' (expected fig7 or fig8)`);
  }
  const format = flags.get("format") ?? "svg";
  if (format !== "svg") {
    throw new Error("only vector (svg) output is supported");
  }
  return {
    csv: positional[0],
    figure,
    out: flags.get("out") ?? "figure.svg",
    format,
    title: flags.get("title") ??
      (figure === "fig8" || direction === "level_to_hover"
        ? "Level-to-hover transition"
        : "Hover-to-level transition"),
    options: {
      zRef: Number(flags.get("z-ref") ?? 100),
      speedRef: Number(flags.get("speed-ref") ?? 100),
      t1: Number(flags.get("t1") ?? 5),
      direction: figure === "fig8" ? "level_to_hover" : direction,
    },
  };
}

export function run(argv: string[]): number {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const text = readFileSync(args.csv, "utf8");
    const data = parseTrajectory(text);
    const svg = renderTransitionFigure(data, args.options, args.title);
    writeFileSync(args.out, svg + "\n");
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const isMain =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
