/** Minimal deterministic SVG chart builder: axes, series, annotations. */

export type Scale = (v: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 <= 0 || d1 <= 0) {
    throw new Error("log scale needs positive domain");
  }
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

export function logTicks(d0: number, d1: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(d0) - 1e-9); Math.pow(10, e) <= d1 * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length < 2) {
    ticks.length = 0;
    ticks.push(d0, d1);
  }
  return ticks;
}

export function linearTicks(d0: number, d1: number, count = 5): number[] {
  const step = (d1 - d0) / (count - 1) || 1;
  return Array.from({ length: count }, (_, i) => d0 + i * step);
}

const fmt = (v: number): string => {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate: ${v}`);
  return v.toPrecision(8).replace(/\.?0+$/, "").replace(/\.$/, "");
};

export const fmtTick = (v: number): string => {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e4 || a < 1e-2)) return v.toExponential(0);
  return String(Math.round(v * 1000) / 1000);
};

export interface Margins {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export class Chart {
  private parts: string[] = [];
  readonly margins: Margins = { left: 64, right: 16, top: 34, bottom: 46 };

  constructor(readonly width = 640, readonly height = 420) {}

  get plotLeft(): number { return this.margins.left; }
  get plotRight(): number { return this.width - this.margins.right; }
  get plotTop(): number { return this.margins.top; }
  get plotBottom(): number { return this.height - this.margins.bottom; }

  frame(): void {
    this.parts.push(
      `<rect x="${this.plotLeft}" y="${this.plotTop}" width="${this.plotRight - this.plotLeft}" ` +
      `height="${this.plotBottom - this.plotTop}" fill="none" stroke="#444" stroke-width="1"/>`,
    );
  }

  title(text: string): void {
    this.parts.push(
      `<text x="${this.width / 2}" y="20" text-anchor="middle" font-size="15" ` +
      `font-family="sans-serif">${escapeXml(text)}</text>`,
    );
  }

  xLabel(text: string): void {
    this.parts.push(
      `<text x="${(this.plotLeft + this.plotRight) / 2}" y="${this.height - 8}" ` +
      `text-anchor="middle" font-size="12" font-family="sans-serif">${escapeXml(text)}</text>`,
    );
  }

  yLabel(text: string): void {
    const x = 16;
    const y = (this.plotTop + this.plotBottom) / 2;
    this.parts.push(
      `<text x="${x}" y="${y}" text-anchor="middle" font-size="12" font-family="sans-serif" ` +
      `transform="rotate(-90 ${x} ${y})">${escapeXml(text)}</text>`,
    );
  }

  xTicks(values: number[], scale: Scale): void {
    for (const v of values) {
      const x = fmt(scale(v));
      this.parts.push(
        `<line x1="${x}" y1="${this.plotBottom}" x2="${x}" y2="${this.plotBottom + 5}" stroke="#444"/>`,
        `<text x="${x}" y="${this.plotBottom + 18}" text-anchor="middle" font-size="11" ` +
        `font-family="sans-serif">${escapeXml(fmtTick(v))}</text>`,
      );
    }
  }

  yTicks(values: number[], scale: Scale): void {
    for (const v of values) {
      const y = fmt(scale(v));
      this.parts.push(
        `<line x1="${this.plotLeft - 5}" y1="${y}" x2="${this.plotLeft}" y2="${y}" stroke="#444"/>`,
        `<text x="${this.plotLeft - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="11" font-family="sans-serif">${escapeXml(fmtTick(v))}</text>`,
      );
    }
  }

  polyline(xs: number[], ys: number[], xScale: Scale, yScale: Scale, stroke: string,
           dash = ""): void {
    if (xs.length !== ys.length || xs.length === 0) {
      throw new Error("polyline needs matching non-empty coordinate arrays");
    }
    const pts = xs.map((x, i) => `${fmt(xScale(x))},${fmt(yScale(ys[i]))}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.5"${dashAttr}/>`,
    );
  }

  hLine(y: number, yScale: Scale, stroke: string, dash = "4 3"): void {
    const yy = fmt(yScale(y));
    this.parts.push(
      `<line x1="${this.plotLeft}" y1="${yy}" x2="${this.plotRight}" y2="${yy}" ` +
      `stroke="${stroke}" stroke-dasharray="${dash}"/>`,
    );
  }

  annotation(text: string, line = 0): void {
    this.parts.push(
      `<text x="${this.plotLeft + 10}" y="${this.plotTop + 18 + 16 * line}" font-size="12" ` +
      `font-family="sans-serif" fill="#b03030" class="annotation">${escapeXml(text)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}">\n<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
