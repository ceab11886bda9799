import { readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { parseSweepCsv } from "./csv.js";
import { NamedCurve, renderSvg } from "./render.js";
import { parsePlotSpec, PlotSpec } from "./schema.js";

/**
 * Load a spec file, read and validate every CSV, render, and write the SVG.
 *
 * All inputs are read and validated before the output file is touched, so a
 * bad CSV never leaves a partial image behind.  Relative paths inside the
 * spec resolve against the spec file's directory.
 */
export function renderSpecFile(specPath: string): { output: string; svg: string } {
  const spec: PlotSpec = parsePlotSpec(readFileSync(specPath, "utf8"), specPath);
  const base = dirname(resolve(specPath));
  const resolveInput = (p: string) => resolve(base, p);

  const curves: NamedCurve[] = spec.curves.map((c) => ({
    label: c.label,
    rows: parseSweepCsv(readFileSync(resolveInput(c.path), "utf8"), c.path),
    isReference: false,
  }));
  if (spec.reference) {
    curves.push({
      label: spec.reference.label,
      rows: parseSweepCsv(
        readFileSync(resolveInput(spec.reference.path), "utf8"),
        spec.reference.path,
      ),
      isReference: true,
    });
  }
  const svg = renderSvg(spec, curves);
  const output = resolve(base, spec.output);
  writeFileSync(output, svg);
  return { output, svg };
}
