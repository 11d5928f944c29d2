import { describe, expect, it } from "vitest";

import { DragController, validateConfig } from "../src/controls.js";
import { defaultViewport, worldToScreen } from "../src/scene.js";
import { ViewModel } from "../src/viewmodel.js";
import type { SessionPayload } from "../src/types.js";

const payload: SessionPayload = {
  session_id: "s9",
  dataset: "demo",
  year: 2019,
  x: "region",
  y: "english",
  nodes: [
    { id: "v:region:Kanto", kind: "attribute", type: "region", label: "Kanto", pinned: true, x: 0, y: -300 },
    { id: "v:english:Business", kind: "attribute", type: "english", label: "Business", pinned: false, x: 40, y: 10 },
    { id: "a:2019:1", kind: "applicant", type: "", label: "1", pinned: false, x: -20, y: 5 },
  ],
  edges: [["a:2019:1", "v:region:Kanto"]],
};

function setup() {
  const vm = new ViewModel();
  vm.applyCreate(payload);
  const calls: { nodeId: string; x: number; y: number }[] = [];
  const api = {
    move: async (_sid: string, nodeId: string, x: number, y: number) => {
      calls.push({ nodeId, x, y });
      return { ok: true };
    },
  };
  return { vm, calls, drag: new DragController(api, vm) };
}

describe("dragging a primary", () => {
  it("issues exactly one move call and keeps the dropped position", async () => {
    const { vm, calls, drag } = setup();
    const vp = defaultViewport(980, 640);
    expect(drag.pointerDown("v:region:Kanto")).toBe("drag");
    drag.pointerMove(vp, 300, 200);
    drag.pointerMove(vp, 350, 260);
    drag.pointerMove(vp, 400, 280);
    await drag.pointerUp(vp, 400, 280);
    expect(calls).toHaveLength(1);
    expect(drag.moveCalls).toBe(1);

    // the local node sits exactly where the server was told it is
    const node = vm.nodes.get("v:region:Kanto")!;
    const [sx, sy] = worldToScreen(vp, node.x, node.y);
    expect(sx).toBeCloseTo(400, 6);
    expect(sy).toBeCloseTo(280, 6);
    expect([calls[0].x, calls[0].y]).toEqual([node.x, node.y]);

    // subsequent step payloads never mention pinned nodes, so the position stays
    vm.applyStep({ changes: [{ id: "a:2019:1", x: 7, y: 7 }], converged: true, iterations: 3 });
    expect([vm.nodes.get("v:region:Kanto")!.x, vm.nodes.get("v:region:Kanto")!.y]).toEqual([
      node.x,
      node.y,
    ]);
  });

  it("drops outside the canvas clamp to the viewport bounds", async () => {
    const { calls, drag } = setup();
    const vp = defaultViewport(980, 640);
    drag.pointerDown("v:region:Kanto");
    drag.pointerMove(vp, 100, 100);
    await drag.pointerUp(vp, -400, 9000);
    expect(calls).toHaveLength(1);
    const [sx, sy] = worldToScreen(vp, calls[0].x, calls[0].y);
    expect(sx).toBeCloseTo(0, 6);
    expect(sy).toBeCloseTo(640, 6);
  });

  it("grabbing an applicant shakes instead of calling the server", async () => {
    const { calls, drag } = setup();
    const vp = defaultViewport(980, 640);
    expect(drag.pointerDown("a:2019:1")).toBe("shake");
    expect(drag.shakeNode).toBe("a:2019:1");
    drag.pointerMove(vp, 200, 200);
    await drag.pointerUp(vp, 200, 200);
    expect(calls).toHaveLength(0);
  });

  it("secondary attributes are not draggable either", () => {
    const { drag } = setup();
    expect(drag.pointerDown("v:english:Business")).toBe("shake");
  });

  it("empty space pans", () => {
    const { drag } = setup();
    expect(drag.pointerDown(null)).toBe("pan");
  });

  it("a click without movement sends nothing", async () => {
    const { calls, drag } = setup();
    const vp = defaultViewport(980, 640);
    drag.pointerDown("v:region:Kanto");
    await drag.pointerUp(vp, 490, 320);
    expect(calls).toHaveLength(0);
  });
});

describe("config validation", () => {
  const valid = { x: "region", y: "english", year: 2019, layout: "circular", limit: null, offset: null, seed: 0 };

  it("accepts a sane config", () => {
    expect(validateConfig(valid)).toEqual([]);
  });

  it("rejects x equal to y", () => {
    const problems = validateConfig({ ...valid, y: "region" });
    expect(problems.some((p) => p.field === "y")).toBe(true);
  });

  it("rejects non-positive limits", () => {
    expect(validateConfig({ ...valid, limit: 0 }).some((p) => p.field === "limit")).toBe(true);
    expect(validateConfig({ ...valid, limit: -3 }).some((p) => p.field === "limit")).toBe(true);
    expect(validateConfig({ ...valid, limit: 2.5 }).some((p) => p.field === "limit")).toBe(true);
    expect(validateConfig({ ...valid, limit: 4 })).toEqual([]);
  });
});
