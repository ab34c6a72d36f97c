import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { parseTrajectory } from "../src/csv.js";
import { buildPanels, renderTransitionFigure } from "../src/figure.js";
import { run } from "../src/main.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixturePath = join(here, "fixtures", "hover_to_level_short.csv");
// criterion-7 trajectory produced by the simulator's acceptance run, when present
const fullRunPath = join(here, "..", "..", "runs", "hover_to_level.csv");

const OPTS = { zRef: 100, speedRef: 56.3, t1: 6, direction: "hover_to_level" as const };

function panelCount(svg: string): number {
  return (svg.match(/class="panel"/g) ?? []).length;
}

describe("figure rendering", () => {
  const data = parseTrajectory(readFileSync(fixturePath, "utf8"));

  it("renders 16 populated panels", () => {
    const panels = buildPanels(data, OPTS);
    expect(panels).toHaveLength(16);
    for (const p of panels) {
      expect(p.series.length).toBeGreaterThan(0);
      for (const s of p.series) {
        expect(s.x.length).toBe(s.y.length);
        expect(s.x.length).toBeGreaterThan(100);
        expect(s.y.every(Number.isFinite)).toBe(true);
      }
    }
  });

  it("converts tilt angle to degrees (ends near 90)", () => {
    const panels = buildPanels(data, OPTS);
    const tilt = panels.find((p) => p.id === "m")!;
    const y = tilt.series[0].y;
    expect(Math.max(...y)).toBeGreaterThan(85);
    expect(Math.max(...y)).toBeLessThan(95);
  });

  it("emits SVG with all panels, unit labels and dashed overlays", () => {
    const svg = renderTransitionFigure(data, OPTS);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(panelCount(svg)).toBe(16);
    for (const unit of ["[m]", "[m/s]", "[deg]", "[deg/s]", "[deg/s^2]", "[N]"]) {
      expect(svg).toContain(unit);
    }
    expect((svg.match(/stroke-dasharray/g) ?? []).length).toBeGreaterThanOrEqual(3);
    expect((svg.match(/<polyline/g) ?? []).length).toBeGreaterThanOrEqual(16 + 3);
    // every panel has a drawn series with many points
    for (const chunk of svg.split('class="panel"').slice(1)) {
      expect(chunk).toContain("<polyline");
    }
  });

  it("renders the full acceptance trajectory when available", () => {
    if (!existsSync(fullRunPath)) {
      console.warn("full acceptance CSV not present; fixture-only run");
      return;
    }
    const full = parseTrajectory(readFileSync(fullRunPath, "utf8"));
    const svg = renderTransitionFigure(full, { ...OPTS, speedRef: 100, t1: 5 });
    expect(panelCount(svg)).toBe(16);
  });
});

describe("plots CLI", () => {
  it("writes the figure file and reports success", () => {
    const out = join(mkdtempSync(join(tmpdir(), "plots-")), "fig.svg");
    const code = run([fixturePath, "--figure", "fig7", "--out", out,
                      "--speed-ref", "56.3", "--t1", "6"]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(panelCount(svg)).toBe(16);
  });

  it("fails cleanly on a header-only CSV without writing", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const csv = join(dir, "empty.csv");
    const header = readFileSync(fixturePath, "utf8").split("\n")[0];
    writeFileSync(csv, header + "\n");
    const out = join(dir, "fig.svg");
    const code = run([csv, "--out", out]);
    expect(code).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("rejects unknown figures and raster formats", () => {
    expect(run([fixturePath, "--figure", "fig9"])).toBe(2);
    expect(run([fixturePath, "--format", "png"])).toBe(2);
  });

  it("fig8 defaults to the level-to-hover overlay", () => {
    const out = join(mkdtempSync(join(tmpdir(), "plots-")), "fig8.svg");
    const code = run([fixturePath, "--figure", "fig8", "--out", out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("Level-to-hover");
  });
});
