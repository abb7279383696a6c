#!/usr/bin/env node
/**
 * step-extract: analyse an ISO 10303-21 (STEP) file.
 *
 *   step-extract <file.stp> [--report out.txt] [--fragment out.json]
 *                [--height H] [--axis x|y|z]
 *
 * The report always prints to stdout; --report and --fragment additionally
 * write files.  Exit codes: 0 success, 1 unreadable input or kernel parse
 * failure or bad usage.
 */

import * as fs from "fs";
import { extract, StepReadError } from "./extract";
import { DEFAULT_CONFIG, emitFragment, FragmentConfig } from "./fragment";
import { renderReport } from "./report";

interface CliArgs {
  input: string;
  reportPath?: string;
  fragmentPath?: string;
  config: FragmentConfig;
}

function parseArgs(argv: string[]): CliArgs {
  const args = [...argv];
  const config: FragmentConfig = { ...DEFAULT_CONFIG };
  let input: string | undefined;
  let reportPath: string | undefined;
  let fragmentPath: string | undefined;
  while (args.length) {
    const arg = args.shift()!;
    if (arg === "--report") {
      reportPath = args.shift();
    } else if (arg === "--fragment") {
      fragmentPath = args.shift();
    } else if (arg === "--height") {
      config.defaultHeightMm = Number(args.shift());
    } else if (arg === "--axis") {
      const axis = args.shift();
      if (axis !== "x" && axis !== "y" && axis !== "z") {
        throw new Error("--axis must be x, y or z");
      }
      config.axisOverride = axis;
    } else if (arg.startsWith("-")) {
      throw new Error(`unknown flag ${arg}`);
    } else if (input === undefined) {
      input = arg;
    } else {
      throw new Error(`unexpected argument ${arg}`);
    }
  }
  if (!input) {
    throw new Error("usage: step-extract <file.stp> [--report out.txt] [--fragment out.json]");
  }
  if (config.defaultHeightMm !== undefined && !(config.defaultHeightMm > 0)) {
    throw new Error("--height must be a positive number");
  }
  return { input, reportPath, fragmentPath, config };
}

export async function main(argv: string[]): Promise<number> {
  let cli: CliArgs;
  try {
    cli = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
  try {
    const extraction = await extract(cli.input);
    const report = renderReport(extraction);
    process.stdout.write(report);
    if (cli.reportPath) {
      fs.writeFileSync(cli.reportPath, report, "utf-8");
      console.error(`report written to ${cli.reportPath}`);
    }
    if (cli.fragmentPath) {
      const fragment = emitFragment(extraction, cli.config);
      fs.writeFileSync(cli.fragmentPath, JSON.stringify(fragment, null, 2) + "\n", "utf-8");
      console.error(
        `fragment with ${fragment.obstacles.length} obstacle(s) written to ${cli.fragmentPath}` +
          (fragment.metadata.skipped.length
            ? ` (${fragment.metadata.skipped.length} surface(s) skipped)`
            : "")
      );
    }
    return 0;
  } catch (err) {
    if (err instanceof StepReadError) {
      console.error(`error: ${err.message}`);
    } else {
      console.error(`unexpected error: ${err instanceof Error ? err.stack : err}`);
    }
    return 1;
  }
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => process.exit(code));
}
