import { ticks as linearTicks } from "d3-array";

import { SweepRow } from "./csv.js";
import { PlotSpec } from "./schema.js";

export class RenderError extends Error {}

export interface NamedCurve {
  label: string;
  rows: SweepRow[];
  /** Reference curves are dashed and carry no error bars. */
  isReference: boolean;
}

const WIDTH = 760;
const HEIGHT = 520;
const MARGIN = { left: 72, right: 170, top: 44, bottom: 58 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/** Fixed-precision numeric text so output never depends on the platform. */
function fmt(value: number): string {
  if (value === 0) return "0";
  return Number(value.toPrecision(6)).toExponential().replace(/e\+?(-?)0*(\d)/, "e$1$2")
    .replace(/\.?0+e/, "e");
}

/** Human-friendly tick text: plain for mid-range magnitudes. */
function tickText(value: number): string {
  const abs = Math.abs(value);
  if (value === 0) return "0";
  if (abs >= 0.001 && abs < 10000) {
    return Number(value.toPrecision(6)).toString();
  }
  return fmt(value);
}

interface Scale {
  (value: number): number;
  ticks(): number[];
  domain: [number, number];
}

function makeScale(
  kind: "log" | "linear",
  domain: [number, number],
  range: [number, number],
): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  let fn: (v: number) => number;
  let tickValues: () => number[];
  if (kind === "log") {
    if (d0 <= 0) {
      throw new RenderError(
        `log axis requires positive values, got minimum ${d0}`,
      );
    }
    const l0 = Math.log10(d0);
    const l1 = Math.log10(d1);
    fn = (v) => r0 + ((Math.log10(v) - l0) / (l1 - l0)) * (r1 - r0);
    tickValues = () => {
      const out: number[] = [];
      for (let k = Math.ceil(l0 - 1e-9); k <= Math.floor(l1 + 1e-9); k++) {
        out.push(Math.pow(10, k));
      }
      // A domain narrower than one decade still needs some ticks.
      return out.length >= 2 ? out : linearTicks(d0, d1, 5);
    };
  } else {
    fn = (v) => r0 + ((v - d0) / (d1 - d0)) * (r1 - r0);
    tickValues = () => linearTicks(d0, d1, 6);
  }
  const scale = fn as Scale;
  scale.ticks = tickValues;
  scale.domain = domain;
  return scale;
}

function dataDomain(
  curves: NamedCurve[],
  axis: "x" | "y",
  kind: "log" | "linear",
): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const curve of curves) {
    for (const row of curve.rows) {
      const values =
        axis === "x" ? [row.p] : curve.isReference
          ? [row.rate]
          : [row.rate, row.ci_low, row.ci_high];
      for (const v of values) {
        if (kind === "log" && v <= 0) continue;
        lo = Math.min(lo, v);
        hi = Math.max(hi, v);
      }
    }
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    throw new RenderError(`no plottable ${axis} values for a ${kind} axis`);
  }
  if (lo === hi) {
    // Degenerate single-value domain: widen symmetrically.
    return kind === "log" ? [lo / 2, hi * 2] : [lo - 1, hi + 1];
  }
  if (kind === "log") return [lo / 1.25, hi * 1.25];
  const pad = (hi - lo) * 0.06;
  return [lo - pad, hi + pad];
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Intersection of two named curves, piecewise-linear in scaled coordinates.
 * Returns null when the difference never changes sign.
 */
export function findCrossover(
  a: SweepRow[],
  b: SweepRow[],
  xKind: "log" | "linear",
  yKind: "log" | "linear",
): { x: number; y: number } | null {
  const tx = (v: number) => (xKind === "log" ? Math.log10(v) : v);
  const ty = (v: number) => (yKind === "log" ? Math.log10(v) : v);
  const interp = (rows: SweepRow[], x: number): number | null => {
    for (let i = 0; i + 1 < rows.length; i++) {
      const x0 = tx(rows[i].p);
      const x1 = tx(rows[i + 1].p);
      if (x >= Math.min(x0, x1) && x <= Math.max(x0, x1) && x0 !== x1) {
        const t = (x - x0) / (x1 - x0);
        return ty(rows[i].rate) + t * (ty(rows[i + 1].rate) - ty(rows[i].rate));
      }
    }
    return null;
  };
  const xs = [...a.map((r) => tx(r.p)), ...b.map((r) => tx(r.p))]
    .sort((u, v) => u - v)
    .filter((x, i, arr) => i === 0 || x !== arr[i - 1]);
  let prev: { x: number; d: number } | null = null;
  for (const x of xs) {
    const ya = interp(a, x);
    const yb = interp(b, x);
    if (ya === null || yb === null) continue;
    const d = ya - yb;
    if (prev && (prev.d <= 0) !== (d <= 0)) {
      const t = prev.d / (prev.d - d);
      const xc = prev.x + t * (x - prev.x);
      const yc = interp(a, xc);
      if (yc !== null) {
        return {
          x: xKind === "log" ? Math.pow(10, xc) : xc,
          y: yKind === "log" ? Math.pow(10, yc) : yc,
        };
      }
    }
    prev = { x, d };
  }
  return null;
}

/** Render the full plot as an SVG string (pure function of its inputs). */
export function renderSvg(spec: PlotSpec, curves: NamedCurve[]): string {
  const xKind = spec.axes.x;
  const yKind = spec.axes.y;
  const x = makeScale(xKind, dataDomain(curves, "x", xKind), [
    MARGIN.left,
    WIDTH - MARGIN.right,
  ]);
  const y = makeScale(yKind, dataDomain(curves, "y", yKind), [
    HEIGHT - MARGIN.bottom,
    MARGIN.top,
  ]);
  const px = (v: number) => x(v).toFixed(2);
  const py = (v: number) => y(v).toFixed(2);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);

  // Grid and ticks.
  for (const t of x.ticks()) {
    const gx = px(t);
    parts.push(
      `<line x1="${gx}" y1="${MARGIN.top}" x2="${gx}" y2="${HEIGHT - MARGIN.bottom}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${gx}" y="${HEIGHT - MARGIN.bottom + 18}" font-size="12" ` +
        `text-anchor="middle" fill="#333333">${esc(tickText(t))}</text>`,
    );
  }
  for (const t of y.ticks()) {
    const gy = py(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${gy}" x2="${WIDTH - MARGIN.right}" y2="${gy}" ` +
        `stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${gy}" font-size="12" text-anchor="end" ` +
        `dominant-baseline="middle" fill="#333333">${esc(tickText(t))}</text>`,
    );
  }

  // Axes frame.
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" ` +
      `width="${WIDTH - MARGIN.left - MARGIN.right}" ` +
      `height="${HEIGHT - MARGIN.top - MARGIN.bottom}" ` +
      `fill="none" stroke="#000000" stroke-width="1"/>`,
  );

  // Curves.
  let colorIndex = 0;
  const legend: { label: string; color: string; dashed: boolean }[] = [];
  for (const curve of curves) {
    const color = curve.isReference ? "#555555" : PALETTE[colorIndex++ % PALETTE.length];
    const dash = curve.isReference ? ` stroke-dasharray="7 5"` : "";
    const pts = curve.rows
      .filter((r) => (xKind !== "log" || r.p > 0) && (yKind !== "log" || r.rate > 0))
      .map((r) => `${px(r.p)},${py(r.rate)}`)
      .join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="2"${dash}/>`,
    );
    if (!curve.isReference) {
      for (const r of curve.rows) {
        if (yKind === "log" && (r.ci_low <= 0 || r.ci_high <= 0)) continue;
        const cx = px(r.p);
        parts.push(
          `<line x1="${cx}" y1="${py(r.ci_low)}" x2="${cx}" y2="${py(r.ci_high)}" ` +
            `stroke="${color}" stroke-width="1.5"/>`,
        );
        for (const bound of [r.ci_low, r.ci_high]) {
          parts.push(
            `<line x1="${(x(r.p) - 4).toFixed(2)}" y1="${py(bound)}" ` +
              `x2="${(x(r.p) + 4).toFixed(2)}" y2="${py(bound)}" ` +
              `stroke="${color}" stroke-width="1.5"/>`,
          );
        }
        parts.push(
          `<circle cx="${cx}" cy="${py(r.rate)}" r="3" fill="${color}"/>`,
        );
      }
    }
    legend.push({ label: curve.label, color, dashed: curve.isReference });
  }

  // Crossover marker.
  if (spec.crossover) {
    const byLabel = new Map(curves.map((c) => [c.label, c.rows]));
    const a = byLabel.get(spec.crossover.a);
    const b = byLabel.get(spec.crossover.b);
    if (!a || !b) {
      const missing = !a ? spec.crossover.a : spec.crossover.b;
      throw new RenderError(`crossover refers to unknown curve "${missing}"`);
    }
    const hit = findCrossover(a, b, xKind, yKind);
    if (hit) {
      parts.push(
        `<line x1="${px(hit.x)}" y1="${MARGIN.top}" x2="${px(hit.x)}" ` +
          `y2="${HEIGHT - MARGIN.bottom}" stroke="#000000" stroke-width="1" ` +
          `stroke-dasharray="3 4"/>`,
      );
      parts.push(
        `<circle cx="${px(hit.x)}" cy="${py(hit.y)}" r="6" fill="none" ` +
          `stroke="#000000" stroke-width="2"/>`,
      );
      parts.push(
        `<text x="${(x(hit.x) + 8).toFixed(2)}" y="${MARGIN.top + 14}" ` +
          `font-size="12" fill="#000000">p* = ${esc(fmt(hit.x))}</text>`,
      );
    }
  }

  // Legend.
  const lx = WIDTH - MARGIN.right + 14;
  legend.forEach((entry, i) => {
    const ly = MARGIN.top + 10 + i * 22;
    const dash = entry.dashed ? ` stroke-dasharray="7 5"` : "";
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" ` +
        `stroke="${entry.color}" stroke-width="2"${dash}/>`,
    );
    parts.push(
      `<text x="${lx + 32}" y="${ly}" font-size="12" dominant-baseline="middle" ` +
        `fill="#000000">${esc(entry.label)}</text>`,
    );
  });

  // Labels and title.
  if (spec.title) {
    parts.push(
      `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="24" font-size="16" ` +
        `text-anchor="middle" fill="#000000">${esc(spec.title)}</text>`,
    );
  }
  parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 14}" ` +
      `font-size="13" text-anchor="middle" fill="#000000">${esc(spec.xlabel)}</text>`,
  );
  parts.push(
    `<text x="20" y="${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2}" font-size="13" ` +
      `text-anchor="middle" fill="#000000" ` +
      `transform="rotate(-90 20 ${(MARGIN.top + HEIGHT - MARGIN.bottom) / 2})">` +
      `${esc(spec.ylabel)}</text>`,
  );

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
