#!/usr/bin/env node
import { CsvError } from "./csv.js";
import { RenderError } from "./render.js";
import { renderSpecFile } from "./run.js";
import { SpecError } from "./schema.js";

function usage(): void {
  console.error("usage: plotkit --spec spec.json");
}

export function main(argv: string[]): number {
  const args = argv.slice(2);
  const specIndex = args.indexOf("--spec");
  if (specIndex === -1 || specIndex + 1 >= args.length || args.length !== 2) {
    usage();
    return 1;
  }
  try {
    const { output } = renderSpecFile(args[specIndex + 1]);
    console.log(`wrote ${output}`);
    return 0;
  } catch (exc) {
    if (exc instanceof SpecError || exc instanceof CsvError || exc instanceof RenderError) {
      console.error(`error: ${exc.message}`);
      return 1;
    }
    console.error(`error: ${(exc as Error).message}`);
    return 2;
  }
}

process.exit(main(process.argv));
