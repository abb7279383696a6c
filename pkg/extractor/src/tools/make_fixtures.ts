/**
 * Regenerates the STEP fixtures with the geometry kernel itself, so they
 * are valid by construction: a 10 mm cube and the reference cylinder
 * (R = 20 mm about +Z at (-245, 0, -100), 40 mm tall).
 */

import * as fs from "fs";
import * as path from "path";
import { loadKernel } from "../kernel";

async function main(): Promise<void> {
  const oc = await loadKernel();
  const fixtures = path.join(__dirname, "..", "..", "fixtures");
  fs.mkdirSync(fixtures, { recursive: true });

  const writeShape = (shape: any, virtualName: string, outName: string) => {
    const writer = new oc.STEPControl_Writer_1();
    writer.Transfer(shape, oc.STEPControl_StepModelType.STEPControl_AsIs, true);
    writer.Write(virtualName);
    const text = oc.FS.readFile(virtualName, { encoding: "utf8" });
    fs.writeFileSync(path.join(fixtures, outName), text);
    console.log(`wrote ${outName} (${text.length} bytes)`);
  };

  // virtual names stay under the wasm build's 10-character path limit
  const cube = new oc.BRepPrimAPI_MakeBox_1(10, 10, 10);
  writeShape(cube.Shape(), "/a.step", "cube.step");

  const axis = new oc.gp_Ax2_3(new oc.gp_Pnt_3(-245, 0, -100), new oc.gp_Dir_4(0, 0, 1));
  const cylinder = new oc.BRepPrimAPI_MakeCylinder_3(axis, 20, 40);
  writeShape(cylinder.Shape(), "/b.step", "cylinder.step");

  const sphere = new oc.BRepPrimAPI_MakeSphere_5(new oc.gp_Pnt_3(10, 20, 30), 7.5);
  writeShape(sphere.Shape(), "/c.step", "sphere.step");
}

main().then(
  () => process.exit(0),
  (err) => {
    console.error(err);
    process.exit(1);
  }
);
