/**
 * Plain-text extraction report.
 *
 * The layout (banner widths, indent arrows, %03d surface numbers, fixed
 * decimal places, preserved negative zero) is a contract with downstream
 * review tooling; change it only with a new golden file.
 */

import { Extraction } from "./extract";

function fixed(value: number, places: number): string {
  const text = value.toFixed(places);
  // JavaScript drops the sign of negative zero; keep it.
  return Object.is(value, -0) && !text.startsWith("-") ? `-${text}` : text;
}

export function renderReport(extraction: Extraction): string {
  const lines: string[] = [];
  lines.push(`Loading STEP file: ${extraction.fileName}...`);
  lines.push("");
  lines.push("========================================");
  lines.push("       STEP FILE TOPOLOGY METRICS       ");
  lines.push("========================================");
  lines.push(` Total Unique Vertices (Points): ${extraction.metrics.vertices}`);
  lines.push(` Total Unique Edges (Lines):     ${extraction.metrics.edges}`);
  lines.push(` Total Unique Faces (Surfaces):  ${extraction.metrics.faces}`);
  lines.push("========================================");
  lines.push("");
  lines.push("--- SURFACE GEOMETRY DETECTED ---");
  for (const record of extraction.surfaces) {
    lines.push(` Surface #${String(record.index).padStart(3, "0")}: ${record.label}`);
    if (record.radiusMm !== undefined && record.center !== undefined) {
      lines.push(`   -> Dimension: Radius = ${fixed(record.radiusMm, 2)} mm`);
      const [x, y, z] = record.center;
      lines.push(
        `   -> Center XYZ: (${fixed(x, 3)}, ${fixed(y, 3)}, ${fixed(z, 3)})`
      );
    }
  }
  lines.push("");
  lines.push("Analysis Complete.");
  return lines.join("\n") + "\n";
}
