/** Maps a parsed trajectory onto the figure panels. */

import type { Trajectory } from "./csv.js";
import {
  FigureOptions,
  PanelSpec,
  fig7Layout,
  tiltSchedule,
} from "./layout.js";
import { Panel, Series, renderFigure } from "./svg.js";

export function buildPanels(data: Trajectory, opts: FigureOptions): Panel[] {
  const t = data.get("t")!;
  const specs: PanelSpec[] = fig7Layout(opts);
  return specs.map((spec) => {
    const series: Series[] = spec.series.map((s) => ({
      x: t,
      y: data.get(s.column)!.map((v) => v * s.scale),
      color: s.color,
      label: s.label,
      dash: s.dash,
    }));
    if (spec.overlay) {
      const y =
        spec.overlay.kind === "constant"
          ? t.map(() => spec.overlay!.value!)
          : t.map((ti) => tiltSchedule(ti, opts.t1, opts.direction));
      series.push({
        x: t,
        y,
        color: "#777",
        label: spec.overlay.label,
        dash: "6,4",
      });
    }
    return {
      id: spec.id,
      title: spec.title,
      unit: spec.unit,
      series,
      legend: spec.legend,
    };
  });
}

export function renderTransitionFigure(
  data: Trajectory,
  opts: FigureOptions,
  title = "Mode transition",
): string {
  return renderFigure(buildPanels(data, opts), title);
}
