import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { fig7Layout, tiltSchedule } from "../src/layout.js";

const here = dirname(fileURLToPath(import.meta.url));
const OPTS = { zRef: 100, speedRef: 100, t1: 5, direction: "hover_to_level" as const };

describe("fig7 layout", () => {
  it("has 16 panels in a stable order (golden)", () => {
    const layout = fig7Layout(OPTS).map((p) => ({
      id: p.id,
      title: p.title,
      unit: p.unit,
      columns: p.series.map((s) => s.column),
      overlay: p.overlay?.kind ?? null,
    }));
    expect(layout).toHaveLength(16);
    const golden = JSON.parse(
      readFileSync(join(here, "golden", "fig7_layout.json"), "utf8"),
    );
    expect(layout).toEqual(golden);
  });

  it("uses display units: degrees for angles, SI elsewhere", () => {
    const byId = new Map(fig7Layout(OPTS).map((p) => [p.id, p]));
    expect(byId.get("e")!.unit).toBe("m");
    expect(byId.get("f")!.unit).toBe("m/s");
    expect(byId.get("g")!.unit).toBe("deg");
    expect(byId.get("h")!.unit).toBe("deg/s");
    expect(byId.get("o")!.unit).toBe("deg/s^2");
    expect(byId.get("p")!.unit).toBe("N");
    // radian channels carry the conversion factor
    expect(byId.get("g")!.series[0].scale).toBeCloseTo(180 / Math.PI, 10);
    expect(byId.get("a")!.series[0].scale).toBe(1);
  });

  it("thrust panel overlays all four rotors with a legend", () => {
    const thrust = fig7Layout(OPTS).find((p) => p.id === "p")!;
    expect(thrust.series.map((s) => s.column)).toEqual(["T1", "T2", "T3", "T4"]);
    expect(thrust.legend).toBe(true);
  });

  it("tilt schedule overlay hits the waypoints", () => {
    expect(tiltSchedule(0, 5, "hover_to_level")).toBe(0);
    expect(tiltSchedule(5, 5, "hover_to_level")).toBeCloseTo(45, 9);
    expect(tiltSchedule(10, 5, "hover_to_level")).toBeCloseTo(90, 9);
    expect(tiltSchedule(99, 5, "hover_to_level")).toBeCloseTo(90, 9);
    expect(tiltSchedule(0, 5, "level_to_hover")).toBeCloseTo(90, 9);
    expect(tiltSchedule(10, 5, "level_to_hover")).toBeCloseTo(0, 9);
  });
});
