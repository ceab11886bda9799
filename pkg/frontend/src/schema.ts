import { z } from "zod";

/** One input curve: a sweep CSV plus its legend label. */
export const CurveSpecSchema = z.object({
  path: z.string().min(1),
  label: z.string().min(1),
});

const AxisScale = z.enum(["log", "linear"]);

/**
 * The plot description consumed by `plotkit --spec spec.json`.
 *
 * All referenced CSVs must use the sweep schema
 * `p,trials,failures,rate,ci_low,ci_high`.
 */
export const PlotSpecSchema = z.object({
  curves: z.array(CurveSpecSchema).min(1),
  /** Optional dashed reference curve (no error bars). */
  reference: CurveSpecSchema.optional(),
  axes: z
    .object({ x: AxisScale.default("log"), y: AxisScale.default("log") })
    .default({ x: "log", y: "log" }),
  /** Draw a marker where these two labelled curves intersect. */
  crossover: z.object({ a: z.string(), b: z.string() }).optional(),
  output: z.string().min(1),
  title: z.string().default(""),
  xlabel: z.string().default("p"),
  ylabel: z.string().default("rate"),
});

export type CurveSpec = z.infer<typeof CurveSpecSchema>;
export type PlotSpec = z.infer<typeof PlotSpecSchema>;

export class SpecError extends Error {}

export function parsePlotSpec(jsonText: string, source: string): PlotSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(jsonText);
  } catch (exc) {
    throw new SpecError(`${source}: not valid JSON: ${(exc as Error).message}`);
  }
  const result = PlotSpecSchema.safeParse(raw);
  if (!result.success) {
    const first = result.error.issues[0];
    const where = first.path.join(".") || "(root)";
    throw new SpecError(`${source}: invalid plot spec at ${where}: ${first.message}`);
  }
  return result.data;
}
