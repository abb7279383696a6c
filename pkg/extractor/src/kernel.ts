/**
 * Loader for the OpenCASCADE WASM kernel.
 *
 * The published bundle ships an Emscripten module wrapped for web bundlers
 * (an ESM export around CommonJS-era internals), which plain node cannot
 * import directly.  We read the source, swap the export statement for a
 * CommonJS one and evaluate it ourselves, feeding the wasm binary in as a
 * buffer so the loader never tries to fetch() a filesystem path.
 */

import * as fs from "fs";
import * as path from "path";
import { createRequire } from "module";

export type OpenCascade = any;

let kernelPromise: Promise<OpenCascade> | null = null;

function nodeRequire(): NodeRequire {
  // Compiled CJS has __filename; under test runners that transform to ESM
  // we fall back to resolving from the package directory.
  try {
    if (typeof __filename !== "undefined") {
      return createRequire(__filename);
    }
  } catch {
    /* fall through */
  }
  return createRequire(path.join(process.cwd(), "package.json"));
}

export function loadKernel(): Promise<OpenCascade> {
  if (kernelPromise) {
    return kernelPromise;
  }
  const req = nodeRequire();
  const distJs = req.resolve("opencascade.js/dist/opencascade.wasm.js");
  const distDir = path.dirname(distJs);
  const wasmBinary = fs.readFileSync(path.join(distDir, "opencascade.wasm.wasm"));

  let source = fs.readFileSync(distJs, "utf-8");
  source = source.replace(/export default opencascade;\s*$/, "module.exports = opencascade;\n");
  const mod = { exports: {} as any };
  const evaluate = new Function("module", "exports", "require", "__dirname", "__filename", source);
  evaluate(mod, mod.exports, req, distDir, distJs);
  const factory = mod.exports as (opts: object) => Promise<OpenCascade>;

  kernelPromise = new (factory as any)({ wasmBinary });
  return kernelPromise!;
}
