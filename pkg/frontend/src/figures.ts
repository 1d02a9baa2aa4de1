/**
 * Figure builders for run artifacts.
 *
 * Every number displayed (slopes, references, verdicts) is read from
 * summary.json; this layer never refits.  The growth figure applies the
 * fixed frame map peak_psi = sqrt(2 sqrt(2 sigma)) * peak_amp -- the same
 * algebraic column the summary's fit was computed on.
 */

import { ArtifactError, RunArtifacts, column, requireFit } from "./artifacts.js";
import { Chart, linearScale, linearTicks, logScale, logTicks } from "./svg.js";

export type FigureKind = "growth" | "dissipation_decay" | "lock_angle" | "envelope_compare";

export interface FigureSpec {
  runDir: string;
  kind: FigureKind;
  outPath: string;
}

export function slopeAnnotation(exponent: number, r2?: number): string {
  const slope = `slope = ${exponent.toFixed(4)}`;
  return r2 === undefined ? slope : `${slope}  (r^2 = ${r2.toFixed(5)})`;
}

function logLogChart(
  title: string, xLab: string, yLab: string, xs: number[], ys: number[],
  fit: { exponent: number; prefactor: number; r_squared: number },
): Chart {
  if (xs.length === 0) throw new ArtifactError("empty series");
  const chart = new Chart();
  const xd: [number, number] = [Math.min(...xs), Math.max(...xs)];
  const positive = ys.filter((v) => v > 0);
  if (positive.length !== ys.length) throw new ArtifactError("series must be positive for log axes");
  const yd: [number, number] = [Math.min(...ys), Math.max(...ys)];
  const xScale = logScale(xd[0], xd[1], chart.plotLeft, chart.plotRight);
  const yScale = logScale(yd[0] * 0.85, yd[1] * 1.18, chart.plotBottom, chart.plotTop);
  chart.title(title);
  chart.frame();
  chart.xLabel(xLab);
  chart.yLabel(yLab);
  chart.xTicks(logTicks(xd[0], xd[1]), xScale);
  chart.yTicks(logTicks(yd[0] * 0.85, yd[1] * 1.18), yScale);
  chart.polyline(xs, ys, xScale, yScale, "#1f5fa8");
  const fitYs = xs.map((x) => fit.prefactor * Math.pow(x, fit.exponent));
  chart.polyline(xs, fitYs, xScale, yScale, "#b03030", "6 4");
  chart.annotation(slopeAnnotation(fit.exponent, fit.r_squared));
  return chart;
}

export function growthFigure(run: RunArtifacts): string {
  const fit = requireFit(run.summary, "growth");
  const tau = column(run.trajectory, "tau");
  const sigma = column(run.trajectory, "time");
  const peak = column(run.trajectory, "peak_amp");
  const peakPsi = peak.map((p, i) => Math.sqrt(2 * Math.sqrt(2 * sigma[i])) * p);
  const chart = logLogChart(
    "Original-frame peak growth", "tau", "peak |Psi|", tau, peakPsi, fit,
  );
  return chart.render();
}

export function dissipationFigure(run: RunArtifacts): string {
  const fit = requireFit(run.summary, "eta_decay");
  const sigma = column(run.trajectory, "time");
  const eta = column(run.trajectory, "eta");
  const chart = logLogChart(
    "Damped equilibrium amplitude", "sigma", "eta", sigma, eta, fit,
  );
  return chart.render();
}

export function lockAngleFigure(run: RunArtifacts): string {
  const lock = run.summary.results.lock;
  if (!lock) throw new ArtifactError("summary has no lock result");
  const sigma = column(run.trajectory, "time");
  const alpha = column(run.trajectory, "alpha");
  const chart = new Chart();
  const xScale = linearScale(sigma[0], sigma[sigma.length - 1], chart.plotLeft, chart.plotRight);
  const lo = Math.min(lock.reference - lock.band, Math.min(...alpha)) - 0.1;
  const hi = Math.max(lock.reference + lock.band, Math.max(...alpha)) + 0.1;
  const yScale = linearScale(lo, hi, chart.plotBottom, chart.plotTop);
  chart.title("Lock angle trace");
  chart.frame();
  chart.xLabel("sigma");
  chart.yLabel("alpha (rad)");
  chart.xTicks(linearTicks(sigma[0], sigma[sigma.length - 1]), xScale);
  chart.yTicks(linearTicks(lo, hi), yScale);
  chart.hLine(lock.reference, yScale, "#3a8a3a", "2 2");
  chart.hLine(lock.reference + lock.band, yScale, "#888");
  chart.hLine(lock.reference - lock.band, yScale, "#888");
  chart.polyline(sigma, alpha, xScale, yScale, "#1f5fa8");
  chart.annotation(
    `reference = ${lock.reference.toFixed(4)} rad, band = ±${lock.band.toFixed(2)}, ` +
    `locked = ${lock.locked}`,
  );
  return chart.render();
}

export function envelopeCompareFigure(run: RunArtifacts): string {
  const sg = run.summary.results.sg_compare;
  if (!sg) throw new ArtifactError("summary has no sg_compare result");
  const eps = [...sg.epsilons].sort((a, b) => a - b);
  const mismatches = eps.map((e) => {
    const v = sg.mismatches[String(e)];
    if (v === undefined) throw new ArtifactError(`no mismatch recorded for eps = ${e}`);
    return v;
  });
  const chart = new Chart();
  const xScale = logScale(eps[0], eps[eps.length - 1], chart.plotLeft, chart.plotRight);
  const yScale = logScale(
    Math.min(...mismatches) * 0.8, Math.max(...mismatches) * 1.25,
    chart.plotBottom, chart.plotTop,
  );
  chart.title("Envelope reduction error vs eps");
  chart.frame();
  chart.xLabel("eps");
  chart.yLabel("relative L2 mismatch");
  chart.xTicks(eps, xScale);
  chart.yTicks(logTicks(Math.min(...mismatches) * 0.8, Math.max(...mismatches) * 1.25), yScale);
  chart.polyline(eps, mismatches, xScale, yScale, "#1f5fa8");
  chart.annotation(`monotone with eps: ${sg.monotone}`);
  return chart.render();
}

const BUILDERS: Record<FigureKind, (run: RunArtifacts) => string> = {
  growth: growthFigure,
  dissipation_decay: dissipationFigure,
  lock_angle: lockAngleFigure,
  envelope_compare: envelopeCompareFigure,
};

export function renderFigure(run: RunArtifacts, kind: FigureKind): string {
  const builder = BUILDERS[kind];
  if (!builder) {
    throw new ArtifactError(
      `unknown figure kind '${kind}' (expected ${Object.keys(BUILDERS).join(", ")})`,
    );
  }
  return builder(run);
}
