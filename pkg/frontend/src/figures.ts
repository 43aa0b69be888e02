import { writeFileSync } from "node:fs";
import { Fit, powerLawFit } from "./fit.js";
import { Row, Table, num, readTable, str } from "./schema.js";
import {
  Box,
  LegendEntry,
  Marker,
  PALETTE,
  ScaleKind,
  Scaled,
  gridSvg,
  legendSvg,
  lineSvg,
  makeScale,
  markersSvg,
  svgDocument,
  textSvg,
  xAxisSvg,
  yAxisSvg,
} from "./svg.js";

export type FigureKind = "steps" | "depth" | "cost" | "weight";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  xScale?: ScaleKind;
  yScale?: ScaleKind;
  /** Power-law guide exponents in |c1| for the cost figure. */
  guideExponents?: number[];
}

export interface RenderResult {
  output: string;
  rows: number;
}

export class FigureError extends Error {}

const ACCEPTED_SCHEMAS: Record<FigureKind, readonly string[]> = {
  steps: ["pite_sweep"],
  depth: ["pite_sweep", "qpe_sweep"],
  cost: ["cost"],
  weight: ["weight_sweep"],
};

const MARKERS: readonly Marker[] = ["circle", "square", "triangle", "diamond"];

interface Series {
  label: string;
  color: string;
  marker?: Marker;
  dash?: string;
  points: Array<[number, number]>;
}

interface PanelResult {
  svg: string;
  xs: Scaled;
  ys: Scaled;
}

function domainOf(values: number[], kind: ScaleKind): [number, number] {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (lo === hi) {
    if (kind === "log") {
      lo /= 2;
      hi *= 2;
    } else {
      lo -= 1;
      hi += 1;
    }
  }
  return [lo, hi];
}

/** Grid, both axes, and every series drawn into one plot box. */
function panel(
  box: Box,
  xKind: ScaleKind,
  yKind: ScaleKind,
  xLabel: string,
  yLabel: string,
  series: Series[],
): PanelResult {
  const drawable = series
    .map((s) => ({
      ...s,
      points: s.points.filter(
        ([x, y]) => (xKind !== "log" || x > 0) && (yKind !== "log" || y > 0),
      ),
    }))
    .filter((s) => s.points.length > 0);
  const pts = drawable.flatMap((s) => s.points);
  if (pts.length === 0) {
    throw new FigureError("no data: no plottable points after scale filtering");
  }
  const xs = makeScale(xKind, domainOf(pts.map((p) => p[0]), xKind), [box.x, box.x + box.w]);
  const ys = makeScale(yKind, domainOf(pts.map((p) => p[1]), yKind), [box.y + box.h, box.y]);
  const parts = [gridSvg(xs, ys, box)];
  for (const s of drawable) {
    const pixels = s.points.map(([x, y]): [number, number] => [xs.pos(x), ys.pos(y)]);
    parts.push(lineSvg(pixels, s.color, s.dash));
    if (s.marker) {
      parts.push(markersSvg(pixels, s.marker, s.color));
    }
  }
  parts.push(xAxisSvg(xs, box, xLabel));
  parts.push(yAxisSvg(ys, box, yLabel));
  return { svg: parts.join("\n"), xs, ys };
}

function legendOf(series: Series[]): LegendEntry[] {
  return series.map((s) => ({ label: s.label, color: s.color, marker: s.marker, dash: s.dash }));
}

function orderLabel(mode: string, order: number): string {
  return mode.startsWith("exact") ? "exact" : `order ${order}`;
}

function groupRows(rows: Row[], key: (r: Row) => string): Map<string, Row[]> {
  const groups = new Map<string, Row[]>();
  for (const r of rows) {
    const k = key(r);
    const bucket = groups.get(k);
    if (bucket) {
      bucket.push(r);
    } else {
      groups.set(k, [r]);
    }
  }
  return groups;
}

function sortedPoints(rows: Row[], xcol: string, ycol: string, x = (v: number) => v): Array<[number, number]> {
  return rows
    .map((r): [number, number] => [x(num(r, xcol)), num(r, ycol)])
    .sort((a, b) => a[0] - b[0]);
}

function stepsFigure(spec: FigureSpec, rows: Row[]): string {
  const groups = groupRows(rows, (r) => orderLabel(str(r, "mode"), num(r, "trotter_order")));
  const seriesFor = (ycol: string): Series[] =>
    [...groups.entries()].map(([label, sub], i) => ({
      label,
      color: PALETTE[i % PALETTE.length],
      marker: MARKERS[i % MARKERS.length],
      points: sortedPoints(sub, "K", ycol),
    }));
  const xKind = spec.xScale ?? "linear";
  const yKind = spec.yScale ?? "log";
  const top = panel({ x: 80, y: 30, w: 470, h: 260 }, xKind, yKind,
    "", "success probability P_K", seriesFor("P_K"));
  const bottom = panel({ x: 80, y: 370, w: 470, h: 260 }, xKind, yKind,
    "steps K", "infidelity δ_K", seriesFor("delta_K"));
  const body = [top.svg, bottom.svg, legendSvg(legendOf(seriesFor("P_K")), 575, 45)].join("\n");
  return svgDocument(760, 700, body);
}

function depthSeries(tables: Table[]): Series[] {
  const series: Series[] = [];
  for (const table of tables) {
    const isQpe = table.schema === "qpe_sweep";
    const method = isQpe ? "QPE" : "PITE";
    const groups = groupRows(table.rows, (r) => `${method} ${orderLabel(str(r, "mode"), num(r, "trotter_order"))}`);
    for (const [label, sub] of groups) {
      const points = sub
        .map((r): [number, number] => {
          // exact-step rows carry no compiled circuit; fall back to the formula depth
          const measured = isQpe ? 0 : num(r, "depth_measured");
          const depth = measured > 0 ? measured : num(r, "depth_formula");
          return [depth, num(r, isQpe ? "delta" : "delta_K")];
        })
        .sort((a, b) => a[0] - b[0]);
      series.push({ label, color: "", points });
    }
  }
  series.forEach((s, i) => {
    s.color = PALETTE[i % PALETTE.length];
    s.marker = MARKERS[i % MARKERS.length];
  });
  return series;
}

function depthFigure(spec: FigureSpec, tables: Table[]): string {
  const series = depthSeries(tables);
  const p = panel({ x: 80, y: 30, w: 470, h: 330 }, spec.xScale ?? "log", spec.yScale ?? "log",
    "circuit depth", "infidelity δ", series);
  const body = [p.svg, legendSvg(legendOf(series), 575, 45)].join("\n");
  return svgDocument(780, 430, body);
}

/** Per-method power-law fits of cost against 1/|c1|, as drawn on the cost figure. */
export function costFits(rows: Row[]): Record<string, Fit> {
  const fits: Record<string, Fit> = {};
  for (const [method, sub] of groupRows(rows, (r) => str(r, "method"))) {
    fits[method] = powerLawFit(
      sub.map((r) => 1 / num(r, "c1_abs")),
      sub.map((r) => num(r, "cost")),
    );
  }
  return fits;
}

function costFigure(spec: FigureSpec, rows: Row[]): string {
  const groups = groupRows(rows, (r) => str(r, "method"));
  const series: Series[] = [...groups.entries()].map(([label, sub], i) => ({
    label,
    color: PALETTE[i % PALETTE.length],
    marker: MARKERS[i % MARKERS.length],
    points: sortedPoints(sub, "c1_abs", "cost", (c1) => 1 / c1),
  }));
  const fits = costFits(rows);
  const allX = series.flatMap((s) => s.points.map((p) => p[0]));
  const allY = series.flatMap((s) => s.points.map((p) => p[1]));
  const xMin = Math.min(...allX);
  const xMax = Math.max(...allX);

  const fitLines: Series[] = [...groups.keys()].map((method, i) => {
    const f = fits[method];
    const at = (x: number) => 10 ** f.intercept * x ** f.slope;
    return {
      label: method,
      color: PALETTE[i % PALETTE.length],
      dash: "6 3",
      points: [[xMin, at(xMin)], [xMax, at(xMax)]],
    };
  });

  // reference fan: cost proportional to |c1|^e rises as x^(-e) against x = 1/|c1|
  const guideAnchor = Math.min(...allY) / 4;
  const exponents = spec.guideExponents ?? [-1, -2, -3];
  const guides: Series[] = exponents.map((e) => ({
    label: `|c1|^${e}`,
    color: "#999999",
    dash: "2 3",
    points: [[xMin, guideAnchor], [xMax, guideAnchor * (xMax / xMin) ** -e]],
  }));

  const p = panel({ x: 80, y: 30, w: 470, h: 330 }, spec.xScale ?? "log", spec.yScale ?? "log",
    "1/|c1|", "total cost", [...series, ...fitLines, ...guides]);
  const labels: string[] = [];
  for (const line of fitLines) {
    const [x, y] = line.points[1];
    labels.push(textSvg(p.xs.pos(x) + 5, p.ys.pos(y) - 4,
      `slope ${fits[line.label].slope.toFixed(2)}`, { size: 10, color: line.color }));
  }
  for (const g of guides) {
    const [x, y] = g.points[1];
    labels.push(textSvg(p.xs.pos(x) + 5, p.ys.pos(y) + 4, g.label, { size: 10, color: "#777777" }));
  }
  const body = [p.svg, labels.join("\n"), legendSvg(legendOf(series), 600, 45)].join("\n");
  return svgDocument(780, 430, body);
}

function weightFigure(spec: FigureSpec, rows: Row[]): string {
  const series: Series[] = [...groupRows(rows, (r) => str(r, "method")).entries()].map(
    ([method, sub], i) => ({
      label: method.toUpperCase(),
      color: PALETTE[i % PALETTE.length],
      marker: MARKERS[i % MARKERS.length],
      points: sortedPoints(sub, "c1_abs", "delta"),
    }),
  );
  const p = panel({ x: 80, y: 30, w: 470, h: 330 }, spec.xScale ?? "linear", spec.yScale ?? "log",
    "ground-state weight |c1|", "infidelity δ", series);
  const body = [p.svg, legendSvg(legendOf(series), 575, 45)].join("\n");
  return svgDocument(760, 430, body);
}

export function buildFigure(spec: FigureSpec, tables: Table[]): string {
  if (tables.length === 0) {
    throw new FigureError("no input tables");
  }
  const accepted = ACCEPTED_SCHEMAS[spec.kind];
  for (const t of tables) {
    if (!accepted.includes(t.schema)) {
      throw new FigureError(
        `${t.path}: schema ${t.schema} is not usable for kind "${spec.kind}" ` +
        `(accepts: ${accepted.join(", ")})`,
      );
    }
  }
  const rows = tables.flatMap((t) => t.rows);
  switch (spec.kind) {
    case "steps":
      return stepsFigure(spec, rows);
    case "depth":
      return depthFigure(spec, tables);
    case "cost":
      return costFigure(spec, rows);
    case "weight":
      return weightFigure(spec, rows);
  }
}

export function render(spec: FigureSpec): RenderResult {
  if (spec.inputs.length === 0) {
    throw new FigureError("no input CSVs given");
  }
  const tables = spec.inputs.map(readTable);
  const svg = buildFigure(spec, tables);
  writeFileSync(spec.output, svg);
  return { output: spec.output, rows: tables.reduce((n, t) => n + t.rows.length, 0) };
}
