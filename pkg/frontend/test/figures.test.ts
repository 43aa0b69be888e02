import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { FigureError, FigureKind, buildFigure, costFits, render } from "../src/figures.js";
import { SCHEMAS, readTable } from "../src/schema.js";

const sample = (name: string) =>
  fileURLToPath(new URL(`../samples/${name}`, import.meta.url));

const FAMILIES: Array<[FigureKind, string[]]> = [
  ["steps", [sample("pite_sweep.csv")]],
  ["depth", [sample("pite_sweep.csv"), sample("qpe_sweep.csv")]],
  ["cost", [sample("cost.csv")]],
  ["weight", [sample("weight_sweep.csv")]],
];

function build(kind: FigureKind, inputs: string[]): string {
  return buildFigure({ kind, inputs, output: "unused.svg" }, inputs.map(readTable));
}

describe("figure families", () => {
  it("renders all four families from the committed samples", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    for (const [kind, inputs] of FAMILIES) {
      const out = join(dir, `${kind}.svg`);
      const result = render({ kind, inputs, output: out });
      expect(result.rows).toBeGreaterThan(0);
      const svg = readFileSync(out, "utf8");
      expect(svg.startsWith("<svg ")).toBe(true);
      expect(svg).toContain("</svg>");
    }
  });

  it("is deterministic: identical bytes on repeat renders", () => {
    for (const [kind, inputs] of FAMILIES) {
      const a = build(kind, inputs);
      const b = build(kind, inputs);
      expect(a).toBe(b);
      expect(a).not.toMatch(/\d{4}-\d{2}-\d{2}/);
    }
  });

  it("lists trotter orders in the steps legend", () => {
    const svg = build("steps", [sample("pite_sweep.csv")]);
    for (const label of ["exact", "order 1", "order 2", "order 4"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
    expect(svg).toContain("success probability P_K");
    expect(svg).toContain("infidelity δ_K");
  });

  it("lists both methods on the depth figure", () => {
    const svg = build("depth", [sample("pite_sweep.csv"), sample("qpe_sweep.csv")]);
    expect(svg).toContain("PITE exact");
    expect(svg).toContain("QPE exact");
    expect(svg).toContain("QPE order 4");
    expect(svg).toContain("circuit depth");
  });

  it("accepts a single input on the depth figure", () => {
    const svg = build("depth", [sample("qpe_sweep.csv")]);
    expect(svg).toContain("QPE order 1");
    expect(svg).not.toContain("PITE");
  });

  it("separates methods on the weight figure", () => {
    const svg = build("weight", [sample("weight_sweep.csv")]);
    expect(svg).toContain(">PITE</text>");
    expect(svg).toContain(">QPE</text>");
    expect(svg).toContain("ground-state weight |c1|");
  });

  it("rejects a schema the kind cannot use", () => {
    expect(() => build("steps", [sample("cost.csv")])).toThrowError(FigureError);
    expect(() => build("cost", [sample("pite_sweep.csv")])).toThrowError(/not usable/);
    expect(() => build("weight", [sample("qpe_sweep.csv")])).toThrowError(/not usable/);
  });

  it("reports no data when every point is filtered by a log axis", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const path = join(dir, "weight_sweep.csv");
    writeFileSync(path, SCHEMAS.weight_sweep.join(",") + "\n42,4,6,pite,1.0,0.5,0.9,0\n");
    expect(() => build("weight", [path])).toThrowError(/no data/);
  });
});

describe("cost figure guides", () => {
  const rows = readTable(sample("cost.csv")).rows;

  it("draws the reference fan and per-method fitted slopes", () => {
    const svg = build("cost", [sample("cost.csv")]);
    for (const label of ["|c1|^-1", "|c1|^-2", "|c1|^-3"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
    for (const method of ["pite", "pite+qaa", "qpe", "qpe+aa"]) {
      expect(svg).toContain(`>${method}</text>`);
    }
    expect(svg).toMatch(/>slope \d+\.\d\d</);
  });

  it("honors custom guide exponents", () => {
    const svg = buildFigure(
      { kind: "cost", inputs: [], output: "unused.svg", guideExponents: [-4] },
      [readTable(sample("cost.csv"))],
    );
    expect(svg).toContain(">|c1|^-4</text>");
    expect(svg).not.toContain(">|c1|^-2</text>");
  });

  it("matches the fitted slopes recorded by the simulation run", () => {
    const manifest = JSON.parse(readFileSync(sample("cost_manifest.json"), "utf8"));
    const fits = costFits(rows);
    const methods = Object.keys(manifest.fits);
    expect(methods.length).toBe(4);
    for (const method of methods) {
      expect(fits[method], method).toBeDefined();
      expect(Math.abs(fits[method].slope - manifest.fits[method].slope), method).toBeLessThanOrEqual(0.1);
    }
  });

  it("fits the expected power laws on the sample sweep", () => {
    const fits = costFits(rows);
    expect(fits.pite.slope).toBeGreaterThan(fits["pite+qaa"].slope);
    expect(fits.qpe.slope).toBeCloseTo(3, 6);
    expect(fits["qpe+aa"].slope).toBeCloseTo(2, 6);
    for (const f of Object.values(fits)) {
      expect(f.rSquared).toBeGreaterThan(0.99);
    }
  });
});
