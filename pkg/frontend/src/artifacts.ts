/**
 * Readers for the run artifacts the simulation CLI writes:
 * trajectory.csv / scan.csv (fixed numeric columns) and summary.json.
 */

import { existsSync, readFileSync } from "fs";
import { join } from "path";

export interface Table {
  columns: string[];
  data: Map<string, number[]>;
  rows: number;
}

export class ArtifactError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 1 || lines[0].trim() === "") {
    throw new ArtifactError("empty CSV");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].trim() === "") continue;
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new ArtifactError(`row ${i} has ${parts.length} fields, expected ${columns.length}`);
    }
    parts.forEach((p, j) => {
      const v = Number(p);
      if (!Number.isFinite(v)) {
        throw new ArtifactError(`row ${i}, column ${columns[j]}: not a finite number: ${p}`);
      }
      data.get(columns[j])!.push(v);
    });
  }
  return { columns, data, rows: lines.length - 1 };
}

export function column(table: Table, name: string): number[] {
  const values = table.data.get(name);
  if (values === undefined) {
    throw new ArtifactError(`missing column '${name}' (have: ${table.columns.join(", ")})`);
  }
  if (values.length === 0) {
    throw new ArtifactError(`column '${name}' is empty`);
  }
  return values;
}

export interface FitSummary {
  exponent: number;
  prefactor: number;
  r_squared: number;
  window: [number, number];
}

export interface RunSummary {
  name: string;
  results: {
    fits?: Record<string, FitSummary>;
    lock?: { reference: number; band: number; mean: number; std: number; locked: boolean };
    eta_band?: { center: number; tolerance: number; min: number; max: number };
    sg_compare?: { epsilons: number[]; mismatches: Record<string, number>; monotone: boolean };
    [key: string]: unknown;
  };
}

export interface RunArtifacts {
  dir: string;
  summary: RunSummary;
  trajectory: Table;
  scan?: Table;
}

export function loadRun(dir: string): RunArtifacts {
  if (!existsSync(dir)) {
    throw new ArtifactError(`run directory does not exist: ${dir}`);
  }
  const summaryPath = join(dir, "summary.json");
  const trajectoryPath = join(dir, "trajectory.csv");
  if (!existsSync(summaryPath) || !existsSync(trajectoryPath)) {
    throw new ArtifactError(`run directory is missing artifacts: ${dir}`);
  }
  const summary = JSON.parse(readFileSync(summaryPath, "utf8")) as RunSummary;
  const trajectory = parseCsv(readFileSync(trajectoryPath, "utf8"));
  const scanPath = join(dir, "scan.csv");
  const scan = existsSync(scanPath) ? parseCsv(readFileSync(scanPath, "utf8")) : undefined;
  return { dir, summary, trajectory, scan };
}

export function requireFit(summary: RunSummary, name: string): FitSummary {
  const fits = summary.results.fits;
  if (!fits || !(name in fits)) {
    throw new ArtifactError(`summary has no fit named '${name}'`);
  }
  return fits[name];
}
