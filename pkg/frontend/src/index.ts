export { CsvError, parseSweepCsv, SWEEP_COLUMNS } from "./csv.js";
export type { SweepRow } from "./csv.js";
export { parsePlotSpec, SpecError } from "./schema.js";
export type { CurveSpec, PlotSpec } from "./schema.js";
export { findCrossover, renderSvg, RenderError } from "./render.js";
export type { NamedCurve } from "./render.js";
export { renderSpecFile } from "./run.js";
