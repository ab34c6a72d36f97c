/**
 * Figure layouts: which trajectory channels go on which panel.
 *
 * The transition figure is a fixed 4x4 grid; panel order and labels are
 * stable across releases (a golden test pins them), so downstream reports
 * can reference "panel (m)" etc. without re-checking.
 */

import type { ColumnName } from "./csv.js";

export interface SeriesSpec {
  column: ColumnName;
  label: string;
  /** multiplies the raw column (e.g. rad -> deg) */
  scale: number;
  color: string;
  dash?: string;
}

export interface OverlaySpec {
  kind: "constant" | "tilt-profile";
  label: string;
  /** constant value (display units) for kind=constant */
  value?: number;
}

export interface PanelSpec {
  id: string;
  title: string;
  unit: string;
  series: SeriesSpec[];
  overlay?: OverlaySpec;
  legend?: boolean;
}

const DEG = 180 / Math.PI;
const C1 = "#1f5fa8";
const PALETTE = ["#1f5fa8", "#c23b22", "#2e8540", "#8a6d3b"];

export interface FigureOptions {
  zRef: number;
  speedRef: number;
  t1: number;
  direction: "hover_to_level" | "level_to_hover";
}

export function fig7Layout(opts: FigureOptions): PanelSpec[] {
  const one = (
    id: string, title: string, unit: string, column: ColumnName,
    scale = 1, overlay?: OverlaySpec,
  ): PanelSpec => ({
    id, title, unit, overlay,
    series: [{ column, label: title, scale, color: C1 }],
  });

  return [
    one("a", "Position X", "m", "X"),
    one("b", "Velocity X", "m/s", "Vx", 1, {
      kind: "constant", value: opts.speedRef, label: "target",
    }),
    one("c", "Position Y", "m", "Y"),
    one("d", "Velocity Y", "m/s", "Vy"),
    one("e", "Position Z", "m", "Z", 1, {
      kind: "constant", value: opts.zRef, label: "reference",
    }),
    one("f", "Velocity Z", "m/s", "Vz"),
    one("g", "Roll angle", "deg", "phi", DEG),
    one("h", "Roll rate", "deg/s", "p_rate", DEG),
    one("i", "Pitch angle", "deg", "theta", DEG),
    one("j", "Pitch rate", "deg/s", "q_rate", DEG),
    one("k", "Yaw angle", "deg", "psi", DEG),
    one("l", "Yaw rate", "deg/s", "r_rate", DEG),
    one("m", "Tilt angle", "deg", "beta", DEG, {
      kind: "tilt-profile", label: "schedule",
    }),
    one("n", "Tilt rate", "deg/s", "beta_dot", DEG),
    one("o", "Tilt acceleration", "deg/s^2", "beta_ddot", DEG),
    {
      id: "p",
      title: "Rotor thrusts",
      unit: "N",
      legend: true,
      series: (["T1", "T2", "T3", "T4"] as ColumnName[]).map((column, i) => ({
        column,
        label: column,
        scale: 1,
        color: PALETTE[i],
      })),
    },
  ];
}

/** Scheduled tilt angle (deg) for the overlay on panel (m). */
export function tiltSchedule(
  t: number, t1: number, direction: FigureOptions["direction"],
): number {
  const Mt = Math.PI / (2 * t1 * t1);
  let beta: number;
  if (t <= 0) beta = 0;
  else if (t <= t1) beta = 0.5 * Mt * t * t;
  else if (t <= 2 * t1) {
    const d = t - t1;
    beta = 0.5 * Mt * t1 * t1 + Mt * t1 * d - 0.5 * Mt * d * d;
  } else beta = Math.PI / 2;
  if (direction === "level_to_hover") beta = Math.PI / 2 - beta;
  return beta * DEG;
}
