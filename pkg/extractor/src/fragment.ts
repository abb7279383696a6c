/**
 * Workspace-fragment emission: the machine-ingestible half of an extraction.
 *
 * Cylindrical surfaces become cylinder obstacles in the verifier's
 * workspace schema.  Centers are kernel-frame coordinates, verbatim; frame
 * alignment is left to workspace authoring.  The obstacle height comes
 * from the face's parametric bounds when the kernel exposes them, else
 * from configuration; the choice is surfaced in the fragment metadata.
 */

import { Extraction, SurfaceRecord } from "./extract";

export interface FragmentConfig {
  /** Fallback height (mm) when a face has no finite parametric bounds. */
  defaultHeightMm: number;
  /** Force this axis for every cylinder instead of snapping the kernel's. */
  axisOverride?: "x" | "y" | "z";
}

export const DEFAULT_CONFIG: FragmentConfig = { defaultHeightMm: 20.0 };

export interface WorkspaceFragment {
  obstacles: Array<{
    label: string;
    shape: {
      type: "cylinder";
      center: [number, number, number];
      axis: "x" | "y" | "z";
      radius: number;
      height: number;
    };
  }>;
  metadata: {
    source_file: string;
    center_convention: string;
    heights: Record<string, "parametric-bounds" | "config-default">;
    skipped: Array<{ index: number; reason: string }>;
  };
}

function snapAxis(direction: [number, number, number]): "x" | "y" | "z" | null {
  const names: Array<"x" | "y" | "z"> = ["x", "y", "z"];
  for (let a = 0; a < 3; a += 1) {
    if (Math.abs(Math.abs(direction[a]) - 1) < 1e-6) {
      return names[a];
    }
  }
  return null;
}

function featureLabel(record: SurfaceRecord): string {
  return `Feature_${String(record.index).padStart(3, "0")}`;
}

export function emitFragment(
  extraction: Extraction,
  config: FragmentConfig = DEFAULT_CONFIG
): WorkspaceFragment {
  const fragment: WorkspaceFragment = {
    obstacles: [],
    metadata: {
      source_file: extraction.fileName,
      center_convention: "kernel-frame, verbatim (not the solid centroid)",
      heights: {},
      skipped: [],
    },
  };
  for (const record of extraction.surfaces) {
    if (record.surfaceClass !== "Cylinder") {
      continue;
    }
    if (record.radiusMm === undefined || record.center === undefined) {
      fragment.metadata.skipped.push({
        index: record.index,
        reason: "cylinder record lacks parameters",
      });
      continue;
    }
    const axis = config.axisOverride ?? (record.axis ? snapAxis(record.axis) : null);
    if (axis === null) {
      fragment.metadata.skipped.push({
        index: record.index,
        reason: "cylinder axis is not machine-aligned",
      });
      continue;
    }
    const label = featureLabel(record);
    const parametric = record.heightMm !== undefined && record.heightMm > 0;
    fragment.obstacles.push({
      label,
      shape: {
        type: "cylinder",
        center: record.center,
        axis,
        radius: record.radiusMm,
        height: parametric ? record.heightMm! : config.defaultHeightMm,
      },
    });
    fragment.metadata.heights[label] = parametric ? "parametric-bounds" : "config-default";
  }
  return fragment;
}
