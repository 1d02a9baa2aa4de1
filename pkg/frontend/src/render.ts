/**
 * CLI: node dist/render.js <run-dir> <kind> <out.svg>
 * kinds: growth | dissipation_decay | lock_angle | envelope_compare
 */

import { writeFileSync } from "fs";

import { ArtifactError, loadRun } from "./artifacts.js";
import { FigureKind, renderFigure } from "./figures.js";

export function main(argv: string[]): number {
  if (argv.length !== 3) {
    console.error("usage: render <run-dir> <kind> <out.svg>");
    return 2;
  }
  const [runDir, kind, outPath] = argv;
  try {
    const run = loadRun(runDir);
    const svg = renderFigure(run, kind as FigureKind);
    writeFileSync(outPath, svg);
  } catch (err) {
    if (err instanceof ArtifactError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.log(`wrote ${outPath}`);
  return 0;
}

process.exitCode = main(process.argv.slice(2));
