import { secondaryColor } from "./palette.js";
import type { ChartSeries } from "./types.js";

export interface ChartLine {
  attributeId: string;
  label: string;
  color: string;
  points: { x: number; y: number }[];
}

export interface ChartGeometry {
  lines: ChartLine[];
  xTicks: { x: number; year: number }[];
  yTicks: { y: number; value: number }[];
  xDomain: [number, number];
  yDomain: [number, number];
}

export const CHART_PADDING = 32;

/** Line-chart geometry for per-year degree series. X spans the dataset's
 * years, Y spans 0..max degree; an all-zero series sits on the baseline. */
export function computeChartGeometry(
  series: ChartSeries[],
  width: number,
  height: number,
): ChartGeometry {
  const years = series.length ? series[0].points.map(([y]) => y) : [];
  const x0 = years.length ? Math.min(...years) : 0;
  const x1 = years.length ? Math.max(...years) : 1;
  const maxDegree = Math.max(1, ...series.flatMap((s) => s.points.map(([, d]) => d)));
  const plotW = width - 2 * CHART_PADDING;
  const plotH = height - 2 * CHART_PADDING;
  const sx = (year: number) =>
    CHART_PADDING + (x1 === x0 ? plotW / 2 : ((year - x0) / (x1 - x0)) * plotW);
  const sy = (deg: number) => height - CHART_PADDING - (deg / maxDegree) * plotH;

  const lines = series.map((s) => ({
    attributeId: s.attribute_id,
    label: s.label,
    color: secondaryColor(s.label),
    points: s.points.map(([year, deg]) => ({ x: sx(year), y: sy(deg) })),
  }));
  const xTicks = years.map((year) => ({ x: sx(year), year }));
  const yStep = Math.max(1, Math.ceil(maxDegree / 5));
  const yTicks = [];
  for (let v = 0; v <= maxDegree; v += yStep) {
    yTicks.push({ y: sy(v), value: v });
  }
  return { lines, xTicks, yTicks, xDomain: [x0, x1], yDomain: [0, maxDegree] };
}

export function paintChart(
  ctx: CanvasRenderingContext2D,
  geometry: ChartGeometry,
  width: number,
  height: number,
  hoveredId: string | null = null,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.strokeStyle = "#888";
  ctx.beginPath();
  ctx.moveTo(CHART_PADDING, CHART_PADDING);
  ctx.lineTo(CHART_PADDING, height - CHART_PADDING);
  ctx.lineTo(width - CHART_PADDING, height - CHART_PADDING);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "center";
  for (const tick of geometry.xTicks) {
    ctx.fillText(String(tick.year), tick.x, height - CHART_PADDING + 14);
  }
  ctx.textAlign = "right";
  for (const tick of geometry.yTicks) {
    ctx.fillText(String(tick.value), CHART_PADDING - 6, tick.y + 3);
  }
  for (const line of geometry.lines) {
    ctx.strokeStyle = line.color;
    ctx.lineWidth = hoveredId === line.attributeId ? 3 : 1.5;
    ctx.beginPath();
    line.points.forEach((p, i) => (i ? ctx.lineTo(p.x, p.y) : ctx.moveTo(p.x, p.y)));
    ctx.stroke();
  }
  ctx.lineWidth = 1;
}

/** Nearest line to a point, for hover-highlight linking to the graph view. */
export function nearestLine(
  geometry: ChartGeometry,
  sx: number,
  sy: number,
  maxDistance = 8,
): string | null {
  let best: string | null = null;
  let bestD = maxDistance;
  for (const line of geometry.lines) {
    for (const p of line.points) {
      const d = Math.hypot(p.x - sx, p.y - sy);
      if (d < bestD) {
        bestD = d;
        best = line.attributeId;
      }
    }
  }
  return best;
}
