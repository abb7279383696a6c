/**
 * B-Rep extraction: load a STEP file through the geometry kernel, count the
 * topology by explorer visits (duplicate-inclusive, so shared edges and
 * vertices are counted once per use) and classify every face's underlying
 * analytic surface, pulling radius and center out of cylinders and spheres.
 */

import * as fs from "fs";
import * as path from "path";
import { loadKernel, OpenCascade } from "./kernel";

export type SurfaceClass =
  | "Plane"
  | "Cylinder"
  | "Cone"
  | "Sphere"
  | "Torus"
  | "Bezier"
  | "BSpline"
  | "Revolution"
  | "Extrusion"
  | "Other";

export interface SurfaceRecord {
  index: number;
  surfaceClass: SurfaceClass;
  label: string;
  radiusMm?: number;
  center?: [number, number, number];
  axis?: [number, number, number];
  /** Axial extent derived from the face's parametric bounds, when finite. */
  heightMm?: number;
}

export interface TopologyMetrics {
  vertices: number;
  edges: number;
  faces: number;
}

export interface Extraction {
  fileName: string;
  metrics: TopologyMetrics;
  surfaces: SurfaceRecord[];
}

/** Human-readable names, matching the extraction report contract. */
export const SURFACE_TYPES: Record<SurfaceClass, string> = {
  Plane: "PLANE (Flat Surface)",
  Cylinder: "CYLINDER (Curved Tube)",
  Cone: "CONE (Tapered Surface)",
  Sphere: "SPHERE (Ball Surface)",
  Torus: "TORUS (Donut/O-Ring Surface)",
  Bezier: "BEZIER SURFACE (Smooth Freeform)",
  BSpline: "B-SPLINE / NURBS SURFACE (Complex Engineering Surface)",
  Revolution: "SURFACE OF REVOLUTION",
  Extrusion: "SURFACE OF EXTRUSION",
  Other: "UNKNOWN COMPLEX SURFACE",
};

export class StepReadError extends Error {}

function classify(oc: OpenCascade, geomType: any): SurfaceClass {
  const G = oc.GeomAbs_SurfaceType;
  switch (geomType) {
    case G.GeomAbs_Plane:
      return "Plane";
    case G.GeomAbs_Cylinder:
      return "Cylinder";
    case G.GeomAbs_Cone:
      return "Cone";
    case G.GeomAbs_Sphere:
      return "Sphere";
    case G.GeomAbs_Torus:
      return "Torus";
    case G.GeomAbs_BezierSurface:
      return "Bezier";
    case G.GeomAbs_BSplineSurface:
      return "BSpline";
    case G.GeomAbs_SurfaceOfRevolution:
      return "Revolution";
    case G.GeomAbs_SurfaceOfExtrusion:
      return "Extrusion";
    default:
      return "Other";
  }
}

function countVisits(oc: OpenCascade, shape: any, kind: any): number {
  const explorer = new oc.TopExp_Explorer_2(shape, kind, oc.TopAbs_ShapeEnum.TopAbs_SHAPE);
  let n = 0;
  while (explorer.More()) {
    n += 1;
    explorer.Next();
  }
  explorer.delete();
  return n;
}

export async function extract(stepPath: string): Promise<Extraction> {
  const oc = await loadKernel();
  if (!fs.existsSync(stepPath)) {
    throw new StepReadError(`file does not exist: ${stepPath}`);
  }
  const bytes = fs.readFileSync(stepPath);
  // the wasm build's ReadFile rejects virtual paths longer than 10 chars
  const virtualPath = "/job.step";
  oc.FS.writeFile(virtualPath, bytes);

  const reader = new oc.STEPControl_Reader_1();
  const status = reader.ReadFile(virtualPath);
  if ((status.value ?? status) !== oc.IFSelect_ReturnStatus.IFSelect_RetDone.value) {
    throw new StepReadError("the geometry kernel failed to parse this STEP file");
  }
  reader.TransferRoots();
  const shape = reader.OneShape();

  const metrics: TopologyMetrics = {
    faces: countVisits(oc, shape, oc.TopAbs_ShapeEnum.TopAbs_FACE),
    edges: countVisits(oc, shape, oc.TopAbs_ShapeEnum.TopAbs_EDGE),
    vertices: countVisits(oc, shape, oc.TopAbs_ShapeEnum.TopAbs_VERTEX),
  };

  const surfaces: SurfaceRecord[] = [];
  const explorer = new oc.TopExp_Explorer_2(
    shape,
    oc.TopAbs_ShapeEnum.TopAbs_FACE,
    oc.TopAbs_ShapeEnum.TopAbs_SHAPE
  );
  let index = 1;
  while (explorer.More()) {
    const face = oc.TopoDS.Face_1(explorer.Current());
    const adaptor = new oc.BRepAdaptor_Surface_2(face, true);
    const surfaceClass = classify(oc, adaptor.GetType());
    const record: SurfaceRecord = {
      index,
      surfaceClass,
      label: SURFACE_TYPES[surfaceClass],
    };
    if (surfaceClass === "Cylinder") {
      const cylinder = adaptor.Cylinder();
      const location = cylinder.Location();
      const direction = cylinder.Axis().Direction();
      record.radiusMm = cylinder.Radius();
      record.center = [location.X(), location.Y(), location.Z()];
      record.axis = [direction.X(), direction.Y(), direction.Z()];
      const v0 = adaptor.FirstVParameter();
      const v1 = adaptor.LastVParameter();
      if (Number.isFinite(v0) && Number.isFinite(v1)) {
        record.heightMm = Math.abs(v1 - v0);
      }
    } else if (surfaceClass === "Sphere") {
      const sphere = adaptor.Sphere();
      const location = sphere.Location();
      record.radiusMm = sphere.Radius();
      record.center = [location.X(), location.Y(), location.Z()];
    }
    surfaces.push(record);
    adaptor.delete();
    index += 1;
    explorer.Next();
  }
  explorer.delete();

  return { fileName: path.basename(stepPath), metrics, surfaces };
}
