import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { ArtifactError, loadRun } from "../src/artifacts.js";
import { renderFigure, slopeAnnotation } from "../src/figures.js";

const FIXTURES = new URL("./fixtures/", import.meta.url).pathname;

function annotationOf(svg: string): string {
  const m = svg.match(/class="annotation">([^<]*)</);
  if (!m) throw new Error("no annotation in figure");
  return m[1];
}

describe("growth figure", () => {
  const run = loadRun(FIXTURES + "autoresonance_lock");

  it("annotates exactly the summary's fitted slope", () => {
    const svg = renderFigure(run, "growth");
    const fit = run.summary.results.fits!["growth"];
    expect(annotationOf(svg)).toBe(slopeAnnotation(fit.exponent, fit.r_squared));
    expect(svg).toContain("<svg");
    expect(svg).toContain("polyline");
  });

  it("is deterministic", () => {
    expect(renderFigure(run, "growth")).toBe(renderFigure(run, "growth"));
  });
});

describe("lock angle figure", () => {
  it("draws the reference and band from the summary", () => {
    const run = loadRun(FIXTURES + "autoresonance_lock");
    const svg = renderFigure(run, "lock_angle");
    const lock = run.summary.results.lock!;
    expect(annotationOf(svg)).toContain(lock.reference.toFixed(4));
    expect(annotationOf(svg)).toContain(`locked = ${lock.locked}`);
  });
});

describe("dissipation figure", () => {
  it("annotates the summary slope", () => {
    const run = loadRun(FIXTURES + "dissipation_decay");
    const svg = renderFigure(run, "dissipation_decay");
    const fit = run.summary.results.fits!["eta_decay"];
    expect(annotationOf(svg)).toBe(slopeAnnotation(fit.exponent, fit.r_squared));
  });
});

describe("envelope comparison figure", () => {
  it("plots mismatch against eps and reports monotonicity", () => {
    const run = loadRun(FIXTURES + "sg_sweep");
    const svg = renderFigure(run, "envelope_compare");
    expect(annotationOf(svg)).toBe("monotone with eps: true");
  });
});

describe("error paths", () => {
  it("rejects unknown figure kinds", () => {
    const run = loadRun(FIXTURES + "sg_sweep");
    expect(() => renderFigure(run, "spectrogram" as never)).toThrow(ArtifactError);
  });

  it("names missing columns", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    writeFileSync(join(dir, "summary.json"), JSON.stringify({
      name: "broken",
      results: { fits: { growth: { exponent: 0.5, prefactor: 1, r_squared: 1, window: [1, 2] } } },
    }));
    writeFileSync(join(dir, "trajectory.csv"), "time,tau\n1,1\n2,2\n");
    expect(() => renderFigure(loadRun(dir), "growth")).toThrow(/peak_amp/);
  });

  it("rejects empty series", () => {
    const dir = mkdtempSync(join(tmpdir(), "fig-"));
    writeFileSync(join(dir, "summary.json"), JSON.stringify({
      name: "empty",
      results: { fits: { eta_decay: { exponent: -0.25, prefactor: 1, r_squared: 1, window: [1, 2] } } },
    }));
    writeFileSync(join(dir, "trajectory.csv"), "time,eta\n");
    expect(() => renderFigure(loadRun(dir), "dissipation_decay")).toThrow(ArtifactError);
  });
});
