/**
 * Dependency-free SVG line charts.
 *
 * Hand-rolled rather than pulled from a charting library: the renderer runs
 * headless (no DOM), the figure is a fixed grid of simple line panels, and
 * byte-stable output keeps the golden tests trivial.
 */

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label?: string;
  dash?: string;
  width?: number;
}

export interface Panel {
  id: string;
  title: string;
  unit: string;
  series: Series[];
  legend?: boolean;
}

const PANEL_W = 300;
const PANEL_H = 210;
const MARGIN = { top: 28, right: 12, bottom: 34, left: 58 };
const COLS = 4;

function niceTicks(lo: number, hi: number, n = 4): number[] {
  if (!(hi > lo)) {
    const pad = Math.abs(lo) > 1e-12 ? Math.abs(lo) * 0.1 : 1.0;
    lo -= pad;
    hi += pad;
  }
  const span = hi - lo;
  const step0 = span / n;
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 2.5, 5, 10].map((c) => c * mag);
  const step = candidates.find((c) => span / c <= n) ?? candidates[candidates.length - 1];
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Math.abs(v) < step * 1e-6 ? 0 : v);
  }
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e5 || a < 1e-3) return v.toExponential(1);
  if (a >= 100) return v.toFixed(0);
  if (a >= 1) return String(Math.round(v * 100) / 100);
  return String(Math.round(v * 1000) / 1000);
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function renderPanel(panel: Panel, px: number, py: number): string {
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;
  let xLo = Infinity, xHi = -Infinity, yLo = Infinity, yHi = -Infinity;
  for (const s of panel.series) {
    for (const v of s.x) {
      if (v < xLo) xLo = v;
      if (v > xHi) xHi = v;
    }
    for (const v of s.y) {
      if (v < yLo) yLo = v;
      if (v > yHi) yHi = v;
    }
  }
  if (!Number.isFinite(xLo)) { xLo = 0; xHi = 1; }
  if (!Number.isFinite(yLo)) { yLo = 0; yHi = 1; }
  if (yHi - yLo < 1e-12) { yLo -= 0.5; yHi += 0.5; }
  const ypad = 0.06 * (yHi - yLo);
  yLo -= ypad;
  yHi += ypad;

  const sx = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * innerW;
  const sy = (v: number) => MARGIN.top + innerH - ((v - yLo) / (yHi - yLo)) * innerH;

  const parts: string[] = [];
  parts.push(`<g class="panel" id="panel-${panel.id}" transform="translate(${px},${py})">`);
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" ` +
    `fill="white" stroke="#444" stroke-width="1"/>`,
  );
  parts.push(
    `<text class="title" x="${MARGIN.left + innerW / 2}" y="16" text-anchor="middle" ` +
    `font-size="12" font-weight="bold">(${panel.id}) ${esc(panel.title)}</text>`,
  );

  for (const t of niceTicks(xLo, xHi)) {
    const x = sx(t);
    parts.push(`<line x1="${x.toFixed(1)}" y1="${MARGIN.top + innerH}" x2="${x.toFixed(1)}" ` +
      `y2="${MARGIN.top + innerH + 4}" stroke="#444"/>`);
    parts.push(`<text x="${x.toFixed(1)}" y="${MARGIN.top + innerH + 15}" text-anchor="middle" ` +
      `font-size="9">${fmt(t)}</text>`);
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = sy(t);
    parts.push(`<line x1="${MARGIN.left - 4}" y1="${y.toFixed(1)}" x2="${MARGIN.left}" ` +
      `y2="${y.toFixed(1)}" stroke="#444"/>`);
    parts.push(`<text x="${MARGIN.left - 6}" y="${(y + 3).toFixed(1)}" text-anchor="end" ` +
      `font-size="9">${fmt(t)}</text>`);
  }
  parts.push(
    `<text class="xlabel" x="${MARGIN.left + innerW / 2}" y="${PANEL_H - 6}" ` +
    `text-anchor="middle" font-size="10">time [s]</text>`,
  );
  parts.push(
    `<text class="ylabel" transform="translate(12,${MARGIN.top + innerH / 2}) rotate(-90)" ` +
    `text-anchor="middle" font-size="10">${esc(panel.title)} [${esc(panel.unit)}]</text>`,
  );

  for (const s of panel.series) {
    const pts: string[] = new Array(s.x.length);
    for (let i = 0; i < s.x.length; i++) {
      pts[i] = `${sx(s.x[i]).toFixed(2)},${sy(s.y[i]).toFixed(2)}`;
    }
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline fill="none" stroke="${s.color}" stroke-width="${s.width ?? 1.2}"${dash} ` +
      `points="${pts.join(" ")}"/>`,
    );
  }

  if (panel.legend) {
    let ly = MARGIN.top + 8;
    for (const s of panel.series) {
      if (!s.label) continue;
      const lx = MARGIN.left + innerW - 46;
      const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
      parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 16}" y2="${ly}" ` +
        `stroke="${s.color}" stroke-width="1.5"${dash}/>`);
      parts.push(`<text x="${lx + 20}" y="${ly + 3}" font-size="9">${esc(s.label)}</text>`);
      ly += 12;
    }
  }
  parts.push("</g>");
  return parts.join("\n");
}

export function renderFigure(panels: Panel[], title: string): string {
  const rows = Math.ceil(panels.length / COLS);
  const width = COLS * PANEL_W;
  const height = rows * PANEL_H + 26;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(`<text x="${width / 2}" y="18" text-anchor="middle" font-size="14" ` +
    `font-weight="bold">${esc(title)}</text>`);
  panels.forEach((panel, i) => {
    const px = (i % COLS) * PANEL_W;
    const py = 26 + Math.floor(i / COLS) * PANEL_H;
    parts.push(renderPanel(panel, px, py));
  });
  parts.push("</svg>");
  return parts.join("\n");
}
