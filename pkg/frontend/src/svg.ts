import { scaleLinear, scaleLog } from "d3";

export type ScaleKind = "linear" | "log";

export interface Box {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface Scaled {
  kind: ScaleKind;
  pos: (v: number) => number;
  ticks: number[];
}

export type Marker = "circle" | "square" | "triangle" | "diamond";

export interface LegendEntry {
  label: string;
  color: string;
  marker?: Marker;
  dash?: string;
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

const FONT = "Helvetica, Arial, sans-serif";
const AXIS_COLOR = "#333333";
const GRID_COLOR = "#dddddd";

const px = (v: number): string => v.toFixed(2);

export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmtNumber(v: number): string {
  // strips float noise from tick values like 3 * 0.1
  return String(Number(v.toPrecision(10)));
}

export function makeScale(kind: ScaleKind, domain: [number, number], range: [number, number]): Scaled {
  if (kind === "log") {
    if (domain[0] <= 0) {
      throw new Error(`log scale needs a positive domain, got [${domain[0]}, ${domain[1]}]`);
    }
    const s = scaleLog().domain(domain).range(range).nice();
    const [lo, hi] = s.domain() as [number, number];
    const ticks: number[] = [];
    for (let e = Math.ceil(Math.log10(lo) - 1e-9); e <= Math.floor(Math.log10(hi) + 1e-9); e++) {
      ticks.push(10 ** e);
    }
    if (ticks.length < 2) {
      return { kind, pos: (v) => s(v), ticks: s.ticks(4) };
    }
    return { kind, pos: (v) => s(v), ticks };
  }
  const s = scaleLinear().domain(domain).range(range).nice(6);
  return { kind, pos: (v) => s(v), ticks: s.ticks(6) };
}

function tickText(v: number, kind: ScaleKind): string {
  if (kind === "log") {
    const e = Math.round(Math.log10(v));
    return `10<tspan baseline-shift="super" font-size="8">${e}</tspan>`;
  }
  return esc(fmtNumber(v));
}

export function xAxisSvg(s: Scaled, box: Box, label: string): string {
  const y0 = box.y + box.h;
  const parts = [
    `<line x1="${px(box.x)}" y1="${px(y0)}" x2="${px(box.x + box.w)}" y2="${px(y0)}" stroke="${AXIS_COLOR}"/>`,
  ];
  for (const t of s.ticks) {
    const x = s.pos(t);
    parts.push(`<line x1="${px(x)}" y1="${px(y0)}" x2="${px(x)}" y2="${px(y0 + 5)}" stroke="${AXIS_COLOR}"/>`);
    parts.push(
      `<text x="${px(x)}" y="${px(y0 + 18)}" text-anchor="middle" font-size="11">${tickText(t, s.kind)}</text>`,
    );
  }
  parts.push(
    `<text x="${px(box.x + box.w / 2)}" y="${px(y0 + 38)}" text-anchor="middle" font-size="13">${esc(label)}</text>`,
  );
  return parts.join("\n");
}

export function yAxisSvg(s: Scaled, box: Box, label: string): string {
  const parts = [
    `<line x1="${px(box.x)}" y1="${px(box.y)}" x2="${px(box.x)}" y2="${px(box.y + box.h)}" stroke="${AXIS_COLOR}"/>`,
  ];
  for (const t of s.ticks) {
    const y = s.pos(t);
    parts.push(`<line x1="${px(box.x - 5)}" y1="${px(y)}" x2="${px(box.x)}" y2="${px(y)}" stroke="${AXIS_COLOR}"/>`);
    parts.push(
      `<text x="${px(box.x - 8)}" y="${px(y + 4)}" text-anchor="end" font-size="11">${tickText(t, s.kind)}</text>`,
    );
  }
  const cx = box.x - 48;
  const cy = box.y + box.h / 2;
  parts.push(
    `<text x="${px(cx)}" y="${px(cy)}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 ${px(cx)} ${px(cy)})">${esc(label)}</text>`,
  );
  return parts.join("\n");
}

export function gridSvg(xs: Scaled, ys: Scaled, box: Box): string {
  const parts: string[] = [];
  for (const t of xs.ticks) {
    const x = xs.pos(t);
    parts.push(`<line x1="${px(x)}" y1="${px(box.y)}" x2="${px(x)}" y2="${px(box.y + box.h)}" stroke="${GRID_COLOR}"/>`);
  }
  for (const t of ys.ticks) {
    const y = ys.pos(t);
    parts.push(`<line x1="${px(box.x)}" y1="${px(y)}" x2="${px(box.x + box.w)}" y2="${px(y)}" stroke="${GRID_COLOR}"/>`);
  }
  return parts.join("\n");
}

export function lineSvg(pixels: Array<[number, number]>, color: string, dash?: string, width = 1.5): string {
  if (pixels.length === 0) return "";
  const d = pixels.map(([x, y], i) => `${i === 0 ? "M" : "L"}${px(x)},${px(y)}`).join("");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<path d="${d}" fill="none" stroke="${color}" stroke-width="${width}"${dashAttr}/>`;
}

export function markerSvg(x: number, y: number, marker: Marker, color: string): string {
  switch (marker) {
    case "circle":
      return `<circle cx="${px(x)}" cy="${px(y)}" r="3" fill="${color}"/>`;
    case "square":
      return `<rect x="${px(x - 3)}" y="${px(y - 3)}" width="6" height="6" fill="${color}"/>`;
    case "triangle":
      return `<path d="M${px(x)},${px(y - 4)}L${px(x + 3.5)},${px(y + 3)}L${px(x - 3.5)},${px(y + 3)}Z" fill="${color}"/>`;
    case "diamond":
      return `<path d="M${px(x)},${px(y - 4)}L${px(x + 4)},${px(y)}L${px(x)},${px(y + 4)}L${px(x - 4)},${px(y)}Z" fill="${color}"/>`;
  }
}

export function markersSvg(pixels: Array<[number, number]>, marker: Marker, color: string): string {
  return pixels.map(([x, y]) => markerSvg(x, y, marker, color)).join("\n");
}

export function textSvg(x: number, y: number, text: string, opts: { anchor?: string; size?: number; color?: string } = {}): string {
  const anchor = opts.anchor ?? "start";
  const size = opts.size ?? 11;
  const color = opts.color ?? "#000000";
  return `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" font-size="${size}" fill="${color}">${esc(text)}</text>`;
}

export function legendSvg(entries: LegendEntry[], x: number, y: number): string {
  const parts: string[] = [];
  entries.forEach((e, i) => {
    const ly = y + i * 18;
    if (e.dash !== undefined || e.marker === undefined) {
      parts.push(lineSvg([[x, ly], [x + 22, ly]], e.color, e.dash));
    } else {
      parts.push(lineSvg([[x, ly], [x + 22, ly]], e.color));
    }
    if (e.marker) {
      parts.push(markerSvg(x + 11, ly, e.marker, e.color));
    }
    parts.push(textSvg(x + 28, ly + 4, e.label));
  });
  return parts.join("\n");
}

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<g font-family="${FONT}" fill="#000000">`,
    body,
    "</g>",
    "</svg>",
    "",
  ].join("\n");
}
