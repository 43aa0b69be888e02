export interface Fit {
  slope: number;
  intercept: number;
  rSquared: number;
}

/** Ordinary least squares for y = slope * x + intercept. */
export function leastSquares(xs: readonly number[], ys: readonly number[]): Fit {
  if (xs.length !== ys.length) {
    throw new Error(`mismatched fit inputs: ${xs.length} vs ${ys.length}`);
  }
  if (xs.length < 2) {
    throw new Error("need at least two points to fit a slope");
  }
  const n = xs.length;
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  let syy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - mx) ** 2;
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) ** 2;
  }
  if (sxx === 0) {
    throw new Error("cannot fit a slope to constant x");
  }
  const slope = sxy / sxx;
  const rSquared = syy === 0 ? 1 : (sxy * sxy) / (sxx * syy);
  return { slope, intercept: my - slope * mx, rSquared };
}

/** Slope of log10(y) vs log10(x); the exponent of a power law y = a * x^b. */
export function powerLawFit(xs: readonly number[], ys: readonly number[]): Fit {
  const lx = xs.map((v) => {
    if (v <= 0) throw new Error(`power-law fit needs positive x, got ${v}`);
    return Math.log10(v);
  });
  const ly = ys.map((v) => {
    if (v <= 0) throw new Error(`power-law fit needs positive y, got ${v}`);
    return Math.log10(v);
  });
  return leastSquares(lx, ly);
}
