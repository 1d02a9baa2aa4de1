import { describe, expect, it } from "vitest";

import { escapeXml, linearScale, logScale, logTicks } from "../src/svg.js";

describe("scales", () => {
  it("linear scale maps endpoints", () => {
    const s = linearScale(0, 10, 100, 200);
    expect(s(0)).toBe(100);
    expect(s(10)).toBe(200);
    expect(s(5)).toBe(150);
  });

  it("log scale maps decades evenly", () => {
    const s = logScale(1, 100, 0, 100);
    expect(s(1)).toBeCloseTo(0);
    expect(s(10)).toBeCloseTo(50);
    expect(s(100)).toBeCloseTo(100);
  });

  it("log scale rejects non-positive domains", () => {
    expect(() => logScale(0, 10, 0, 1)).toThrow();
    expect(() => logScale(-1, 10, 0, 1)).toThrow();
  });

  it("log ticks cover the decades", () => {
    expect(logTicks(1, 1000)).toEqual([1, 10, 100, 1000]);
    // under two decade marks inside the span: fall back to the endpoints
    expect(logTicks(4.5, 45)).toEqual([4.5, 45]);
  });
});

describe("escapeXml", () => {
  it("escapes markup characters", () => {
    expect(escapeXml("a<b & c>d")).toBe("a&lt;b &amp; c&gt;d");
  });
});
